use rayon::prelude::*;
use serde::Serialize;

use super::series::{Decay, TateSeries};
use crate::error::{Error, Result};
use crate::infinity::{InfElem, EXACT};
use crate::Rat;

/// Square matrix of truncated series.
#[derive(Clone, Debug, PartialEq)]
pub struct TateMatrix {
    rows: Vec<Vec<TateSeries>>,
}

impl TateMatrix {
    pub fn new(rows: Vec<Vec<TateSeries>>) -> Self {
        let r = rows.len();
        assert!(rows.iter().all(|row| row.len() == r), "matrix must be square");
        TateMatrix { rows }
    }
    pub fn size(&self) -> usize {
        self.rows.len()
    }
    pub fn entry(&self, i: usize, j: usize) -> &TateSeries {
        &self.rows[i][j]
    }
    pub fn rows(&self) -> &[Vec<TateSeries>] {
        &self.rows
    }
    pub fn t_len(&self) -> usize {
        self.rows.iter().flatten().map(|s| s.t_len()).min().unwrap()
    }
    pub fn mul(&self, o: &TateMatrix) -> TateMatrix {
        let r = self.size();
        assert_eq!(r, o.size());
        let entries: Vec<TateSeries> = (0..r * r)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / r, idx % r);
                let mut acc = self.rows[i][0].mul(&o.rows[0][j]);
                for k in 1..r {
                    acc = acc.add(&self.rows[i][k].mul(&o.rows[k][j]));
                }
                acc
            })
            .collect();
        TateMatrix { rows: entries.chunks(r).map(|c| c.to_vec()).collect() }
    }
    pub fn sub(&self, o: &TateMatrix) -> TateMatrix {
        let rows = self
            .rows
            .iter()
            .zip(&o.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.sub(y)).collect())
            .collect();
        TateMatrix { rows }
    }
    pub fn twist(&self, n: i64) -> Result<TateMatrix> {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|s| s.twist(n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(TateMatrix { rows })
    }
    pub fn map(&self, f: impl Fn(&TateSeries) -> TateSeries) -> TateMatrix {
        TateMatrix { rows: self.rows.iter().map(|row| row.iter().map(&f).collect()).collect() }
    }
    /// Determinant by cofactor expansion.
    pub fn det(&self) -> TateSeries {
        det_rec(&self.rows)
    }
    /// Inverse through the adjugate and a power-series inverse of the determinant.
    pub fn inverse(&self) -> Result<TateMatrix> {
        let r = self.size();
        let dinv = self.det().inv()?;
        if r == 1 {
            return Ok(TateMatrix { rows: vec![vec![dinv]] });
        }
        let mut rows = vec![Vec::with_capacity(r); r];
        for (i, row) in rows.iter_mut().enumerate() {
            for j in 0..r {
                // adj[i][j] = (−1)^{i+j} minor(j, i)
                let m: Vec<Vec<TateSeries>> = (0..r)
                    .filter(|&a| a != j)
                    .map(|a| (0..r).filter(|&b| b != i).map(|b| self.rows[a][b].clone()).collect())
                    .collect();
                let mut c = det_rec(&m);
                if (i + j) % 2 == 1 {
                    c = c.neg();
                }
                row.push(c.mul(&dinv));
            }
        }
        Ok(TateMatrix { rows })
    }
    /// Entrywise evaluation at t = θ.
    pub fn eval_theta(&self) -> Result<Vec<Vec<InfElem>>> {
        self.rows.iter().map(|row| row.iter().map(|s| s.eval_theta()).collect()).collect()
    }
    /// Minimal coefficient valuation over all entries in the window.
    pub fn min_val(&self) -> Rat {
        self.rows.iter().flatten().map(|s| s.min_val()).min().unwrap()
    }
}

fn det_rec(m: &[Vec<TateSeries>]) -> TateSeries {
    let r = m.len();
    if r == 1 {
        return m[0][0].clone();
    }
    let mut acc: Option<TateSeries> = None;
    for j in 0..r {
        let minor: Vec<Vec<TateSeries>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(b, _)| *b != j).map(|(_, x)| x.clone()).collect()).collect();
        let mut term = m[0][j].mul(&det_rec(&minor));
        if j % 2 == 1 {
            term = term.neg();
        }
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    acc.unwrap()
}

impl TateSeries {
    /// Power-series inverse; requires a nonzero constant term.
    pub fn inv(&self) -> Result<TateSeries> {
        let a = self.coeffs();
        let t = a.len();
        let a0inv = a[0].inv()?;
        let mut b: Vec<InfElem> = vec![a0inv.clone()];
        for n in 1..t {
            let mut acc: Option<InfElem> = None;
            for k in 1..=n {
                if a[k].is_zero() && a[k].prec() >= EXACT / 2 {
                    continue;
                }
                let term = a[k].mul(&b[n - k]);
                acc = Some(match acc {
                    None => term,
                    Some(x) => x.add(&term),
                });
            }
            let s = match acc {
                None => a0inv.scale(crate::Fe::ZERO).with_prec_exact(EXACT),
                Some(s) => s.mul(&a0inv).neg(),
            };
            b.push(s);
        }
        Ok(TateSeries::new(b, Decay::None))
    }
}

/// Outcome of checking Ψ^{(−1)} = ΦΨ through the equivalent forward form Ψ = Φ^{(1)}Ψ^{(1)}.
#[derive(Clone, Debug, Serialize)]
pub struct DifferenceReport {
    pub form: String,
    pub window: (usize, usize),
    pub min_residual_val: Rat,
    pub threshold: Rat,
    pub pass: bool,
}

/// Residual of Ψ − Φ^{(1)}Ψ^{(1)} on the t-window [0, T−1].
pub fn check_difference_eq(phi: &TateMatrix, psi: &TateMatrix, threshold: Rat) -> Result<DifferenceReport> {
    if phi.size() != psi.size() {
        return Err(Error::InvalidArgument("Φ and Ψ sizes differ".into()));
    }
    let t = psi.t_len();
    let rhs = phi.twist(1)?.mul(&psi.twist(1)?);
    let res = psi.sub(&rhs);
    let min = res.min_val();
    Ok(DifferenceReport {
        form: "Psi - Phi^(1) Psi^(1)".into(),
        window: (0, t - 1),
        min_residual_val: min,
        threshold,
        pass: min >= threshold,
    })
}

/// Checks that a polynomial series equals c·(t−θ)^n and returns n.
pub fn det_power_of_t_minus_theta(d: &TateSeries) -> Option<usize> {
    let n = match d.decay() {
        Decay::Polynomial { deg } => *deg,
        _ => return None,
    };
    let c = d.coeff(n).clone();
    if c.is_zero() {
        return None;
    }
    let f = c.field().clone();
    let p = f.p() as u64;
    // coefficient of t^k in (t−θ)^n is C(n,k)(−θ)^{n−k}
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for k in 1..row.len() {
            next[k] = (row[k - 1] + row[k]) % p;
        }
        row = next;
    }
    for k in 0..=n {
        let th = InfElem::theta_pow(&f, (n - k) as i64, c.e(), EXACT);
        let sign = if (n - k) % 2 == 1 { f.from_int(-1) } else { f.one() };
        let expect = c.mul(&th).scale(f.mul(sign, f.from_int(row[k] as i64)));
        if !d.coeff(k).agrees_with(&expect) {
            return None;
        }
    }
    Some(n)
}
