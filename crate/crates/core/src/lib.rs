//! Periods, quasi-periods, CM dual t-motives and relation certificates over
//! function fields, computed at controlled precision.

pub mod arith;
pub mod cmtypes;
pub mod error;
pub mod fixtures;
pub mod infinity;
pub mod relhunt;
pub mod report;
pub mod shtuka;
pub mod special;
pub mod tate;
pub mod tmodule;

pub use arith::{FPoly, Fe, FieldDesc, RatFunc, Var};
pub use error::{Error, Result};
pub use infinity::{InfElem, InfElemJson};

/// Exact rational numbers (valuations, slopes, decay bounds).
pub type Rat = num_rational::Ratio<i64>;
