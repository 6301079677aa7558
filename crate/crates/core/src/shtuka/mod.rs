//! Shtuka functions on genus-zero CM models and the CM dual t-motives they define.

mod motive;
mod ring;


pub use motive::{
    build_motive, motive_for, solve_shtuka, tensor_motives, DetReport, DualMotive, Eigendifferential, ExtendedSymbol,
    HodgePinkReport, MotiveJson, PeriodSymbol, ShtukaFunction, ShtukaLedger, ShtukaPair, SigmaReport,
};
pub use ring::{radj, rdet, CoeffRing, RMat, RPoly};
