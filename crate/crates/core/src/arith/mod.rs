//! Finite fields, univariate polynomials, rational functions and root extraction.

mod field;
mod poly;
mod ratfunc;
mod roots;

pub use field::{prime_power, Fe, FieldDesc, FieldSpec};
pub use poly::{render_fe, FPoly, Var};
pub use ratfunc::RatFunc;
pub use roots::{distinct_roots, poly_roots_in_ext, splitting_field, Embedding};

/// x^{q^n} for an element of `field`.
pub fn ff_frobenius(field: &FieldDesc, x: Fe, n: i64) -> Fe {
    field.frobenius(x, n)
}
