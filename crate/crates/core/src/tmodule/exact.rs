use crate::arith::{FPoly, RatFunc, Var};
use crate::error::Result;

/// Exact exponential and logarithm coefficients of a Drinfeld module with
/// ρ_t = Σ a_k τ^k, a_k ∈ F_q(θ) (so a_0 = θ).
pub fn exp_log_exact(a: &[RatFunc], imax: usize) -> Result<(Vec<RatFunc>, Vec<RatFunc>)> {
    let one = RatFunc::from_poly(FPoly::one(a[0].field(), Var::Theta));
    let mut e = vec![one.clone()];
    for i in 1..=imax {
        let mut rhs = RatFunc::from_poly(FPoly::zero(a[0].field(), Var::Theta));
        for (k, ak) in a.iter().enumerate().skip(1) {
            if k > i {
                break;
            }
            rhs = rhs.add(&ak.mul(&e[i - k].twist(k as u32)));
        }
        e.push(rhs.div(&a[0].twist(i as u32).sub(&a[0]))?);
    }
    let mut l = vec![one];
    for m in 1..=imax {
        let mut acc = RatFunc::from_poly(FPoly::zero(a[0].field(), Var::Theta));
        for n in 0..m {
            acc = acc.add(&l[n].mul(&e[m - n].twist(n as u32)));
        }
        l.push(acc.neg());
    }
    Ok((e, l))
}

/// Coefficients c_m = Σ_{i+n=m} E_i L_n^{(i)} of exp∘log, for 1 ≤ m ≤ i_max.
pub fn composition_defect(e: &[RatFunc], l: &[RatFunc]) -> Vec<RatFunc> {
    let m_max = e.len().min(l.len()) - 1;
    (1..=m_max)
        .map(|m| {
            let mut acc = RatFunc::from_poly(FPoly::zero(e[0].field(), Var::Theta));
            for i in 0..=m {
                acc = acc.add(&e[i].mul(&l[m - i].twist(i as u32)));
            }
            acc
        })
        .collect()
}
