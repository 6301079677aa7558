use rayon::prelude::*;
use serde::Serialize;

use super::lattice::Lattice;
use super::module::TModule;
use crate::error::{Error, Result};
use crate::infinity::{InfElem, EXACT};
use crate::tate::{check_difference_eq, Decay, DifferenceReport, TateMatrix, TateSeries};
use crate::Rat;

/// How the Betti generator of a paired motive is read off from AGFs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PsiRecipe {
    /// C^{⊗n} paired with the Carlitz module: Ψ^{-1} = (−f_λ^{(1)})^n.
    CarlitzPower(u32),
    /// Kummer CM module, motive basis 1, y, …, y^{r−1}.
    Kummer,
}

#[derive(Clone, Debug)]
pub struct PsiOutput {
    pub psi: TateMatrix,
    pub psi_inv: TateMatrix,
    pub report: DifferenceReport,
}

impl TModule {
    /// f_λ(t) = Σ_{n<T} m(exp_ρ(∂ρ_t^{−n−1} λ)) t^n, with a linear decay descriptor.
    pub fn agf(&self, lambda: &[InfElem], m: usize, t: usize) -> Result<TateSeries> {
        if m >= self.d() {
            return Err(Error::InvalidArgument(format!("coordinate {m} out of range")));
        }
        let mut args = Vec::with_capacity(t);
        let mut z = lambda.to_vec();
        for _ in 0..t {
            z = self.partial_inv(&z)?;
            args.push(z.clone());
        }
        let coeffs: Vec<InfElem> =
            args.par_iter().map(|a| self.exp(a).map(|v| v[m].clone())).collect::<Result<Vec<_>>>()?;
        let lv = lambda.iter().map(|x| x.val_or_prec()).min().unwrap();
        let mut offset = lv + 1;
        for (n, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                offset = offset.min(c.val().unwrap() - Rat::from(n as i64));
            }
        }
        if self.d() > 1 {
            // coordinates of ∂ρ_t^{−n} shrink like θ^{−n} only up to a polynomial factor
            offset -= Rat::from(self.d() as i64);
        }
        Ok(TateSeries::new(coeffs, Decay::Linear { slope: Rat::from(1), offset }))
    }

    /// AGFs of several periods, computed concurrently.
    pub fn agfs(&self, lambdas: &[Vec<InfElem>], m: usize, t: usize) -> Result<Vec<TateSeries>> {
        lambdas.par_iter().map(|l| self.agf(l, m, t)).collect()
    }

    /// [τ^k, λ] = f_λ^{(k)}(θ) for k ≥ 1 (k = 0 returns the coordinate of λ itself).
    pub fn de_rham_pairing(&self, k: u32, m: usize, lambda: &[InfElem]) -> Result<InfElem> {
        if k == 0 {
            return Ok(lambda[m].clone());
        }
        if lambda.iter().all(|x| x.is_zero()) {
            return Ok(lambda[m].clone());
        }
        let q = self.field().q() as i64;
        let qk = Rat::from(q.pow(k));
        let lv = lambda.iter().map(|x| x.val_or_prec()).min().unwrap();
        let target = Rat::from(self.prec() + 4);
        let off = qk * (lv + 1 - Rat::from(self.d() as i64 - 1));
        let t = ((target - off) / (qk - 1)).ceil().to_integer().clamp(8, 4096) as usize + 2;
        let f = self.agf(lambda, m, t)?;
        let e = f.coeff(0).e() as i64;
        let tw = f.twist(k as i64)?;
        // coefficient n is multiplied by θ^n, so it needs n extra units of precision
        let coeffs = tw.coeffs().iter().enumerate().map(|(n, c)| c.truncate((self.prec() + 30 + n as i64) * e)).collect();
        let tw = TateSeries::new(coeffs, tw.decay().clone());
        let v = tw.eval_theta()?;
        Ok(v.truncate(self.prec() * v.e() as i64))
    }
}

/// Ψ for a motive paired with `rho`, built from AGFs of the lattice generator and checked
/// against Φ by the difference equation.
pub fn build_psi(
    rho: &TModule,
    lattice: &Lattice,
    phi: &TateMatrix,
    recipe: PsiRecipe,
    t: usize,
    threshold: Rat,
) -> Result<PsiOutput> {
    let lambda = lattice.basis.first().ok_or_else(|| Error::InvalidArgument("empty lattice".into()))?;
    let cap = (rho.prec() + 30) * lambda[0].e() as i64;
    let psi_inv = match recipe {
        PsiRecipe::CarlitzPower(n) => {
            let g = rho.agf(lambda, 0, t)?.twist_cap(1, cap)?.neg();
            let mut acc = g.clone();
            for _ in 1..n {
                acc = acc.mul(&g).truncate_prec(cap);
            }
            TateMatrix::new(vec![vec![acc]])
        }
        PsiRecipe::Kummer => {
            let w = rho.cm().ok_or_else(|| Error::InvalidArgument("Kummer recipe needs a CM action".into()))?.rho[0][0][0]
                .clone();
            let r = rho.rank();
            let mut lams = Vec::with_capacity(r);
            for k in 0..r {
                let mut l = lambda[0].clone();
                for _ in 0..(r - 1 - k) {
                    l = l.mul(&w);
                }
                lams.push(vec![l]);
            }
            let b: Vec<TateSeries> = rho
                .agfs(&lams, 0, t)?
                .into_iter()
                .map(|f| f.twist_cap(1, cap))
                .collect::<Result<_>>()?;
            let field = b[0].coeff(0).field().clone();
            let e = b[0].coeff(0).e();
            let minus_t = TateSeries::from_poly(
                vec![InfElem::zero(&field, e, EXACT), InfElem::from_int(&field, -1, e, EXACT)],
                t,
            );
            let mut rows = vec![b.clone()];
            for j in 1..r {
                let prev: &Vec<TateSeries> = &rows[j - 1];
                let mut next = Vec::with_capacity(r);
                next.push(minus_t.mul(&prev[r - 1]));
                next.extend(prev[..r - 1].iter().cloned());
                rows.push(next);
            }
            TateMatrix::new(rows)
        }
    };
    let psi = match recipe {
        PsiRecipe::CarlitzPower(_) => TateMatrix::new(vec![vec![psi_inv.entry(0, 0).inv()?.truncate_prec(cap)]]),
        PsiRecipe::Kummer => psi_inv.inverse()?.map(|s| s.truncate_prec(cap)),
    };
    let report = check_difference_eq(phi, &psi, threshold)?;
    if !report.pass {
        return Err(Error::ConsistencyFailure(format!(
            "difference equation residual {} below {}",
            report.min_residual_val, report.threshold
        )));
    }
    Ok(PsiOutput { psi, psi_inv, report })
}
