//! Bounded-height relation detection over F_q[θ] among Laurent series in 1/θ.
//!
//! Everything is exact F_q-linear algebra on coefficient windows. Every returned relation
//! has been re-checked by substituting the values directly.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{FPoly, Fe, FieldDesc, Var};
use crate::error::{Error, Result};
use crate::infinity::{InfElem, EXACT};
use crate::Rat;

mod echelon;

use echelon::Echelon;

pub const SCOPE: &str = "within bounds";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationBounds {
    /// Polynomial degree bound D (algebraic search only).
    pub deg: usize,
    /// θ-degree bound H on each coefficient.
    pub height: usize,
    /// Margin M in valuation units, held back from the equations and used only for verification.
    pub margin: usize,
}

impl Default for RelationBounds {
    fn default() -> Self {
        RelationBounds { deg: 4, height: 40, margin: 20 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Linear,
    Algebraic,
}

/// One coefficient of a relation: `coeff(θ)` multiplies value (or power) `index`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationTerm {
    pub index: usize,
    /// F_q digits of the coefficient, constant term first.
    pub coeff: Vec<u32>,
    pub rendered: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationCertificate {
    pub kind: RelationKind,
    pub q: u64,
    pub terms: Vec<RelationTerm>,
    pub relation: String,
    /// Valuation of the substituted relation (its precision when it vanishes).
    pub residual_val: Rat,
    pub bounds: RelationBounds,
    /// End of the coefficient window used, in valuation units.
    pub precision: Rat,
    pub unknowns: usize,
    pub rows: usize,
    pub scope: String,
}

impl RelationCertificate {
    /// Coefficients as polynomials in θ over F_q, indexed like `terms`.
    pub fn polys(&self) -> Result<Vec<(usize, FPoly)>> {
        let f = FieldDesc::for_q(self.q)?;
        Ok(self.terms.iter().map(|t| (t.index, FPoly::new(&f, t.coeff.iter().map(|&c| Fe(c)).collect(), Var::Theta))).collect())
    }
    /// Degree of an algebraic relation in X.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.index).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinearRelations {
    pub relations: Vec<RelationCertificate>,
    /// F_q-dimension of the bounded kernel.
    pub kernel_dim: usize,
    /// Kernel vectors discarded by direct substitution.
    pub rejected: usize,
    pub unknowns: usize,
    pub rows: usize,
    pub precision: Rat,
    pub scope: String,
}

impl LinearRelations {
    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }
}

/// Values brought to a common field and ramification, with the coefficient window.
struct Problem {
    big: FieldDesc,
    small: FieldDesc,
    to_small: HashMap<Fe, Fe>,
    values: Vec<InfElem>,
    e: i64,
    h: usize,
    kmin: i64,
    end: i64,
    eq_end: i64,
}

impl Problem {
    fn new(values: &[InfElem], h: usize, margin: usize, unknowns: usize) -> Result<Problem> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("no values".into()));
        }
        let mut acc = values[0].clone();
        for v in &values[1..] {
            acc = InfElem::unify(&acc, v).0;
        }
        let values: Vec<InfElem> = values.iter().map(|v| InfElem::unify(v, &acc).0).collect();
        let big = values[0].field().clone();
        let e = values[0].e() as i64;
        let small = FieldDesc::for_q(big.q())?;
        let emb = small.embedding_into(&big)?;
        let to_small = small.elements().map(|c| (emb.apply(c), c)).collect();
        let he = h as i64 * e;
        let me = margin as i64 * e;
        let kmin = values.iter().map(|v| v.order()).min().unwrap().saturating_sub(he);
        let mut end = values.iter().map(|v| v.prec()).min().unwrap().saturating_sub(he);
        if end >= EXACT / 2 {
            let spread = values.iter().filter(|v| !v.is_zero()).map(|v| v.order()).max().unwrap_or(kmin) - kmin;
            end = kmin + spread + 2 * (unknowns as i64 + 1) + me;
        }
        let eq_end = end - me;
        Ok(Problem { big, small, to_small, values, e, h, kmin, end, eq_end })
    }

    fn m(&self) -> usize {
        self.big.m() as usize
    }

    fn rows(&self) -> usize {
        (self.eq_end - self.kmin).max(0) as usize * self.m()
    }

    fn precision(&self) -> Rat {
        Rat::new(self.end, self.e)
    }

    /// Trace-form rows: for each window exponent and each β in an F_q-basis of the constant
    /// field, the F_q-valued functional Tr(β·coeff) on every (value, θ-degree) column.
    fn build(&self, col: impl Fn(usize, usize) -> usize, ncols: usize) -> Echelon {
        let f = &self.big;
        let m = self.m();
        let g = f.generator();
        let betas: Vec<Fe> = (0..m).map(|r| f.pow(g, r as u64)).collect();
        let trace = |x: Fe| (0..m as i64).fold(Fe::ZERO, |a, s| f.add(a, f.frobenius(x, s)));
        let mut ech = Echelon::new(f.clone(), ncols);
        for k in self.kmin..self.eq_end {
            for beta in &betas {
                let mut row = vec![Fe::ZERO; ncols];
                for (i, v) in self.values.iter().enumerate() {
                    for j in 0..=self.h {
                        let c = v.coeff(k + j as i64 * self.e);
                        if !c.is_zero() {
                            row[col(i, j)] = if m == 1 { c } else { trace(f.mul(*beta, c)) };
                        }
                    }
                }
                ech.insert(row);
                if ech.rank() == ncols {
                    return ech;
                }
            }
        }
        ech
    }

    /// Σ_i c_i(θ)·v_i, with c_i given by its θ-coefficients.
    fn substitute(&self, coeffs: &[Vec<Fe>]) -> InfElem {
        let f = &self.big;
        let mut s = InfElem::zero(f, self.e as u32, EXACT);
        for (v, c) in self.values.iter().zip(coeffs) {
            for (j, &a) in c.iter().enumerate() {
                if !a.is_zero() {
                    s = s.add(&v.mul_theta_pow(j as i64).scale(a));
                }
            }
        }
        s
    }

    fn verifies(&self, coeffs: &[Vec<Fe>]) -> (bool, Rat) {
        let s = self.substitute(coeffs);
        (s.truncate(self.end).is_zero(), s.val_or_prec())
    }

    fn small_poly(&self, c: &[Fe]) -> FPoly {
        FPoly::new(&self.small, c.iter().map(|x| self.to_small[x]).collect(), Var::Theta)
    }

    fn certificate(
        &self,
        kind: RelationKind,
        coeffs: &[Vec<Fe>],
        residual: Rat,
        bounds: RelationBounds,
        unknowns: usize,
        rows: usize,
    ) -> RelationCertificate {
        let mut terms = Vec::new();
        let mut parts = Vec::new();
        let order: Vec<usize> = match kind {
            RelationKind::Linear => (0..coeffs.len()).collect(),
            RelationKind::Algebraic => (0..coeffs.len()).rev().collect(),
        };
        for i in order {
            let p = self.small_poly(&coeffs[i]);
            if p.is_zero() {
                continue;
            }
            let r = p.render();
            let mon = match kind {
                RelationKind::Linear => format!("v{}", i + 1),
                RelationKind::Algebraic if i == 0 => String::new(),
                RelationKind::Algebraic if i == 1 => "X".into(),
                RelationKind::Algebraic => format!("X^{i}"),
            };
            parts.push(match (r.as_str(), mon.is_empty()) {
                (_, true) => format!("({r})"),
                ("1", false) => mon.clone(),
                _ => format!("({r})*{mon}"),
            });
            terms.push(RelationTerm { index: i, coeff: p.coeffs().iter().map(|c| c.0).collect(), rendered: r });
        }
        RelationCertificate {
            kind,
            q: self.small.q(),
            terms,
            relation: format!("{} = 0", parts.join(" + ")),
            residual_val: residual,
            bounds,
            precision: self.precision(),
            unknowns,
            rows,
            scope: SCOPE.into(),
        }
    }
}

/// Normalizes so the first nonzero coefficient has leading θ-coefficient 1.
fn normalize(f: &FieldDesc, coeffs: &mut [Vec<Fe>]) {
    let lead = coeffs.iter().find_map(|c| c.iter().rev().find(|x| !x.is_zero()).copied());
    if let Some(l) = lead {
        let inv = f.inv(l);
        for c in coeffs.iter_mut() {
            for x in c.iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
    }
}

/// F_q[θ]-linear relations Σ c_i(θ) v_i = 0 with deg c_i ≤ H.
///
/// Returns generators of the bounded relation module, ordered by maximal θ-degree; each one
/// is normalized so that its first nonzero coefficient is monic.
pub fn find_linear_relations(values: &[InfElem], bounds: RelationBounds) -> Result<LinearRelations> {
    let k = values.len();
    let h = bounds.height;
    let unknowns = k * (h + 1);
    let pb = Problem::new(values, h, bounds.margin, unknowns)?;
    let rows = pb.rows();
    if unknowns >= rows {
        return Err(Error::InsufficientPrecision { unknowns, rows });
    }
    let col = |i: usize, j: usize| j * k + i;
    let ech = pb.build(col, unknowns);
    let kernel = ech.kernel();
    let f = &pb.big;
    let mut span = Echelon::new(f.clone(), unknowns);
    let mut relations = Vec::new();
    let mut rejected = 0;
    for (_, v) in &kernel {
        if span.contains(v) {
            continue;
        }
        let mut coeffs: Vec<Vec<Fe>> = (0..k).map(|i| (0..=h).map(|j| v[col(i, j)]).collect()).collect();
        normalize(f, &mut coeffs);
        let (ok, residual) = pb.verifies(&coeffs);
        if !ok {
            rejected += 1;
            continue;
        }
        let top = (0..=h).rev().find(|&j| coeffs.iter().any(|c| !c[j].is_zero())).unwrap_or(0);
        for s in 0..=(h - top) {
            let mut shifted = vec![Fe::ZERO; unknowns];
            for (i, c) in coeffs.iter().enumerate() {
                for j in 0..=top {
                    shifted[col(i, j + s)] = c[j];
                }
            }
            span.insert(shifted);
        }
        relations.push(pb.certificate(RelationKind::Linear, &coeffs, residual, bounds, unknowns, rows));
    }
    Ok(LinearRelations {
        relations,
        kernel_dim: kernel.len(),
        rejected,
        unknowns,
        rows,
        precision: pb.precision(),
        scope: SCOPE.into(),
    })
}

/// Least-degree P ∈ F_q[θ][X] with deg_X P ≤ D, θ-degrees ≤ H and P(value) = 0; among those of
/// least X-degree, the one whose leading coefficient has least θ-degree, made monic in θ.
pub fn find_algebraic_relation(value: &InfElem, bounds: RelationBounds) -> Result<Option<RelationCertificate>> {
    let d = bounds.deg;
    if d == 0 {
        return Err(Error::InvalidArgument("degree bound must be ≥ 1".into()));
    }
    if value.is_zero() {
        return Err(Error::InvalidArgument("value vanishes at its precision".into()));
    }
    let h = bounds.height;
    let unknowns = (d + 1) * (h + 1);
    let mut powers = vec![InfElem::one(value.field(), value.e(), EXACT)];
    for i in 1..=d {
        powers.push(powers[i - 1].mul(value));
    }
    let pb = Problem::new(&powers, h, bounds.margin, unknowns)?;
    let rows = pb.rows();
    if unknowns >= rows {
        return Err(Error::InsufficientPrecision { unknowns, rows });
    }
    let col = |i: usize, j: usize| i * (h + 1) + j;
    let ech = pb.build(col, unknowns);
    for (_, v) in ech.kernel() {
        let coeffs: Vec<Vec<Fe>> = (0..=d).map(|i| (0..=h).map(|j| v[col(i, j)]).collect()).collect();
        let (ok, residual) = pb.verifies(&coeffs);
        if ok {
            return Ok(Some(pb.certificate(RelationKind::Algebraic, &coeffs, residual, bounds, unknowns, rows)));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LegendreFiber {
    pub fiber: String,
    /// Valuation of R = ∏ p / π̃^wt.
    pub ratio_val: Option<Rat>,
    pub certificate: Option<RelationCertificate>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LegendreReport {
    pub wt: i64,
    pub fibers: Vec<LegendreFiber>,
    pub pass: bool,
    pub scope: String,
}

/// For each fiber, tests R = (∏ p)/π̃^wt for algebraicity at the given bounds.
pub fn certify_legendre(
    fibers: &[(String, Vec<InfElem>)],
    pitilde: &InfElem,
    wt: i64,
    bounds: RelationBounds,
) -> Result<LegendreReport> {
    let denom = pitilde.pow(wt)?;
    let out: Result<Vec<LegendreFiber>> = fibers
        .par_iter()
        .map(|(name, ps)| {
            let mut r = denom.inv()?;
            for p in ps {
                r = r.mul(p);
            }
            let certificate = find_algebraic_relation(&r, bounds)?;
            Ok(LegendreFiber { fiber: name.clone(), ratio_val: r.val(), certificate })
        })
        .collect();
    let fibers = out?;
    let pass = !fibers.is_empty() && fibers.iter().all(|f| f.certificate.is_some());
    Ok(LegendreReport { wt, fibers, pass, scope: SCOPE.into() })
}
