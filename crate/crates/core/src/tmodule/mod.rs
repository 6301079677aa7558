//! Abelian t-modules: exponential and logarithm, torsion, period lattices, Anderson
//! generating functions, the de Rham pairing and the assembly of Ψ.

mod agf;
mod exact;
mod lattice;
pub mod linalg;
mod module;

pub use agf::{build_psi, PsiOutput, PsiRecipe};
pub use exact::{composition_defect, exp_log_exact};
pub use lattice::{reduce_basis, Lattice, LatticeMeta, TorsionChain};
pub use module::{tw_mul, CmAction, TModule, TModuleJson, TwPoly, WORK_MARGIN};

#[cfg(test)]
mod tests;
