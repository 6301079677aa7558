use serde::Serialize;

use crate::arith::{FieldDesc, RatFunc};
use crate::error::{Error, Result};
use crate::infinity::InfElem;
use crate::Rat;

/// Value of Γ(x) with the degree at which the product was cut off.
#[derive(Clone, Debug)]
pub struct GammaValue {
    pub value: InfElem,
    pub degrees_used: usize,
    /// Lower bound on val(Π_d − 1) for every omitted degree block d.
    pub tail_bound: Rat,
}

/// Machine-readable summary of a gamma evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct GammaSummary {
    pub degrees_used: usize,
    pub tail_bound: Rat,
}

/// Rejects x = 0 and x ∈ −A_+.
pub fn gamma_pole_guard(x: &RatFunc) -> Result<()> {
    if x.is_zero() {
        return Err(Error::PoleArgument);
    }
    if x.is_poly() {
        let neg = x.num.neg();
        if neg.lead() == neg.field().one() {
            return Err(Error::PoleArgument);
        }
    }
    Ok(())
}

/// Γ(x) = x^{−1} ∏_{a ∈ A_+} (1 + x/a)^{−1} to absolute precision N (valuation units).
///
/// The block Π_d = ∏_{a monic, deg a = d} (1 + x/a) equals 1 + r_d with r_0 = x and
/// r_{d+1} = (r_d^q − r_d)/(θ^{q^{d+1}} − θ).
pub fn geometric_gamma(x: &RatFunc, n: i64) -> Result<GammaValue> {
    gamma_pole_guard(x)?;
    let field = x.field().clone();
    let vx = x.val_inf().unwrap();
    // work with enough room for the x^{-1} prefactor and growth of r_d
    let xe = InfElem::from_ratfunc(x, &field, 1, n + vx.abs() + 8)?;
    gamma_of(&xe, n)
}

/// Γ at an InfElem argument (pole test is only up to precision).
pub fn gamma_of(x: &InfElem, n: i64) -> Result<GammaValue> {
    if x.is_zero() {
        return Err(Error::PoleArgument);
    }
    let field: FieldDesc = x.field().clone();
    let e = x.e();
    let q = field.q() as i64;
    let prec = x.prec();
    let one = InfElem::one(&field, e, prec);
    let mut prod = one.clone();
    let mut r = x.clone();
    let cutoff = Rat::new(prec, e as i64);
    let mut d = 0usize;
    let mut qd = 1i64;
    loop {
        let vr = r.val_or_prec();
        // later blocks only get closer to 1
        if d > 0 && vr > Rat::from(0) && vr >= cutoff {
            break;
        }
        let block = one.add(&r);
        if block.is_zero() {
            return Err(Error::PoleArgument);
        }
        prod = prod.mul(&block);
        if d > 4096 {
            return Err(Error::PrecisionExhausted("gamma product does not settle".into()));
        }
        qd = qd.saturating_mul(q);
        let den = InfElem::theta_pow(&field, qd, e, prec).sub(&InfElem::theta(&field, e, prec));
        let rq = if r.is_zero() { r.clone() } else { r.frobenius_cap(1, prec.max(r.order() * q + 1)) };
        r = rq.sub(&r).div(&den)?;
        d += 1;
    }
    let value = x.mul(&prod).inv()?.truncate(n * e as i64);
    Ok(GammaValue { value, degrees_used: d, tail_bound: r.val_or_prec() })
}
