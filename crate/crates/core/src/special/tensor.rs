use crate::cmtypes::{CMDivisor, CMField, CMFieldModel};
use crate::error::{Error, Result};
use crate::shtuka::{motive_for, DualMotive};
use crate::tate::{TateMatrix, TateSeries};

use super::omega::omega_series;

/// C^{⊗n}: the rank-one motive over F_q(t) with Φ = [(t − θ)^n].
pub fn carlitz_tensor_motive(q: u64, n: u32) -> Result<DualMotive> {
    if n == 0 {
        return Err(Error::InvalidArgument("tensor power must be ≥ 1".into()));
    }
    let cm = CMField::new(CMFieldModel::rational(q), 8)?;
    motive_for(&cm, &CMDivisor::single("xi_theta", n as i64))
}

/// Ψ = (Ω^n) for C^{⊗n}, truncated to t-degree < T with coefficients to precision N.
pub fn carlitz_tensor_psi(q: u64, n: u32, t: usize, prec: i64) -> Result<TateMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("tensor power must be ≥ 1".into()));
    }
    let om = omega_series(q, t, prec + 2 * n as i64 + 2)?;
    let cap = prec * om.coeff(0).e() as i64;
    let mut acc = om.clone();
    for _ in 1..n {
        acc = acc.mul(&om);
    }
    Ok(TateMatrix::new(vec![vec![acc.truncate_prec(cap)]]))
}

/// Ω^n as a series (convenience for callers that only need the entry).
pub fn omega_power(q: u64, n: u32, t: usize, prec: i64) -> Result<TateSeries> {
    Ok(carlitz_tensor_psi(q, n, t, prec)?.entry(0, 0).clone())
}
