use crate::arith::FieldDesc;
use crate::error::Result;
use crate::infinity::InfElem;
use crate::tate::{Decay, TateSeries};
use crate::Rat;

/// Canonical (−θ)^{1/(q−1)} to absolute precision `prec` (valuation units).
pub fn carlitz_root(q: u64, prec: i64) -> Result<InfElem> {
    let base = FieldDesc::for_q(q)?;
    let e = (q - 1) as i64;
    InfElem::theta(&base, 1, prec + 2).neg().nth_root(q - 1).map(|r| r.truncate((prec + 2) * e))
}

/// Ω(t) = (−θ)^{−q/(q−1)} ∏_{i≥1} (1 − t/θ^{q^i}) to t-degree < T, coefficients to
/// absolute precision N (valuation units).
pub fn omega_series(q: u64, t: usize, n: i64) -> Result<TateSeries> {
    let rho = carlitz_root(q, n + 4)?;
    let e = rho.e() as i64;
    let field = rho.field().clone();
    let prec = n * e;
    let pre = rho.pow(-(q as i64))?.truncate(prec);
    let one = InfElem::one(&field, e as u32, prec);
    let zero = InfElem::zero(&field, e as u32, prec);
    let mut c = vec![zero.clone(); t];
    c[0] = one;
    let mut qi = q as i64;
    while qi < n + 1 {
        let x = InfElem::theta_pow(&field, -qi, e as u32, prec);
        for j in (1..t).rev() {
            let d = x.mul(&c[j - 1]);
            c[j] = c[j].sub(&d);
        }
        qi *= q as i64;
    }
    let coeffs: Vec<InfElem> = c.iter().map(|x| x.mul(&pre).truncate(prec)).collect();
    let qq = q as i64;
    Ok(TateSeries::new(coeffs, Decay::Geometric { coef: Rat::new(qq, qq - 1), base: qq, offset: Rat::from(0) }))
}

/// π̃ = 1/Ω(θ) to absolute precision N.
pub fn carlitz_period(q: u64, n: i64) -> Result<InfElem> {
    let om = omega_series(q, 64, n + 12)?;
    let v = om.eval_theta()?;
    let e = v.e() as i64;
    Ok(v.inv()?.truncate(n * e))
}

/// The product formula θ·(−θ)^{1/(q−1)}·∏_{i≥1}(1 − θ^{1−q^i})^{−1}, taking for the root the
/// value −ρ with ρ the canonical root used in Ω (the choice that makes 1/Ω(θ) = π̃).
pub fn carlitz_period_product(q: u64, n: i64) -> Result<InfElem> {
    let rho = carlitz_root(q, n + 4)?;
    let e = rho.e();
    let field = rho.field().clone();
    let prec = (n + 4) * e as i64;
    let mut acc = InfElem::theta(&field, e, prec).mul(&rho.neg());
    let mut qi = q as i64;
    while qi - 1 < n + 8 {
        let f = InfElem::one(&field, e, prec).sub(&InfElem::theta_pow(&field, 1 - qi, e, prec));
        acc = acc.div(&f)?;
        qi *= q as i64;
    }
    Ok(acc.truncate(n * e as i64))
}
