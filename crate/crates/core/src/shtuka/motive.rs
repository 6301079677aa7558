use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::ring::{radj, rdet, subsets, CoeffRing, RMat, RPoly};
use crate::arith::FPoly;
use crate::cmtypes::{CMDivisor, CMField, ModelKind, Weight};
use crate::error::{Error, Result};
use crate::infinity::{InfElem, InfElemJson};
use crate::tate::{TateMatrix, TateSeries};
use crate::tmodule::linalg;
use crate::Rat;

/// The function h of a shtuka pair (W = 0 throughout).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShtukaFunction {
    /// h = Σ h_k y^k with h_k ∈ R.
    Poly(Vec<FPoly>),
    /// Constant-extension models: h = (t − θ)^{m_i} on component i, twisted by Frob^ℓ.
    Components(Vec<i64>),
}

impl ShtukaFunction {
    pub fn render(&self) -> String {
        match self {
            ShtukaFunction::Poly(c) => {
                let mut parts = Vec::new();
                for (k, a) in c.iter().enumerate().rev() {
                    if a.is_zero() {
                        continue;
                    }
                    let s = a.render();
                    let s = if a.coeffs().iter().filter(|x| !x.is_zero()).count() > 1 { format!("({s})") } else { s };
                    parts.push(match k {
                        0 => s,
                        1 => format!("{s}*y"),
                        _ => format!("{s}*y^{k}"),
                    });
                }
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join(" + ")
                }
            }
            ShtukaFunction::Components(m) => {
                m.iter().enumerate().map(|(i, e)| format!("[{i}] (t-θ)^{e}")).collect::<Vec<_>>().join(", ")
            }
        }
    }
}

/// Zero/pole accounting for div(h) = Ξ − I_Ξ.
#[derive(Clone, Debug, Serialize)]
pub struct ShtukaLedger {
    pub zeros: BTreeMap<String, i64>,
    pub poles: BTreeMap<String, i64>,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct ShtukaPair {
    pub w: CMDivisor,
    pub h: ShtukaFunction,
    /// 1 for geometric models, ℓ for constant extensions.
    pub twist: u32,
    pub ring: CoeffRing,
    pub ledger: ShtukaLedger,
}

fn require_generalized(cm: &CMField, xi: &CMDivisor) -> Result<()> {
    match cm.cm_weight(xi) {
        Weight::Weight { generalized_cm_type: true, .. } => Ok(()),
        _ => Err(Error::InvalidArgument(format!("{} is not a generalized CM type", xi.render()))),
    }
}

/// ∏ (y − ζ_ξ w)^{m_ξ} in R[y].
fn h_poly(cm: &CMField, ring: &CoeffRing, xi: &CMDivisor) -> Result<Vec<FPoly>> {
    let mut h = vec![ring.one()];
    for (i, p) in cm.points.iter().enumerate() {
        let nu = ring.w().scale(ring.zetas[i]);
        for _ in 0..xi.get(&p.label) {
            let mut next = vec![ring.zero(); h.len() + 1];
            for (k, a) in h.iter().enumerate() {
                next[k + 1] = next[k + 1].add(a);
                next[k] = next[k].sub(&a.mul(&nu));
            }
            h = next;
        }
    }
    Ok(h)
}

/// W = 0 and h with div(h) = Ξ − I_Ξ on a genus-zero model.
pub fn solve_shtuka(cm: &CMField, xi: &CMDivisor) -> Result<ShtukaPair> {
    require_generalized(cm, xi)?;
    let model = &cm.model;
    let ring = CoeffRing::for_field(cm)?;
    let inf = cm.reduction_at_infinity(xi)?;
    let poles: BTreeMap<String, i64> = inf.places.clone();
    if model.kind == ModelKind::ConstExt {
        let exps: Vec<i64> = cm.points.iter().map(|p| xi.get(&p.label)).collect();
        let verified = inf.degree() == xi.degree();
        return Ok(ShtukaPair {
            w: CMDivisor::zero(),
            h: ShtukaFunction::Components(exps),
            twist: model.ell,
            ring,
            ledger: ShtukaLedger { zeros: xi.0.clone(), poles, verified },
        });
    }
    let param = model.param.as_ref().ok_or(Error::UnsupportedGenus)?;
    if param.den.as_slice() != [1] {
        return Err(Error::UnsupportedCoefficients("y has finite poles; only poles above ∞ are supported".into()));
    }
    let h = h_poly(cm, &ring, xi)?;
    // t(ν_ξ) must be θ for every zero of h, and y has its only pole at y = ∞
    let p = param.num_poly(&ring.field);
    let mut verified = poles.keys().all(|k| k == "y=∞") && inf.degree() == (h.len() as i64 - 1);
    for (i, pt) in cm.points.iter().enumerate() {
        if xi.get(&pt.label) == 0 {
            continue;
        }
        let nu = ring.w().scale(ring.zetas[i]);
        let t_at = RPoly::from_fq(&ring, &p).eval(&nu);
        verified &= t_at == ring.theta();
    }
    Ok(ShtukaPair { w: CMDivisor::zero(), h: ShtukaFunction::Poly(h), twist: 1, ring, ledger: ShtukaLedger { zeros: xi.0.clone(), poles, verified } })
}

#[derive(Clone, Debug, Serialize)]
pub struct DetReport {
    pub det: String,
    pub exponent: Option<usize>,
    pub expected: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaReport {
    /// I_Ξ·M ⊆ σM.
    pub ideal_in_sigma: bool,
    /// σM ⊆ I_Ξ·M.
    pub sigma_in_ideal: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HodgePinkReport {
    pub weights: Vec<i64>,
    pub expected: Vec<i64>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct Eigendifferential {
    pub point: String,
    pub row: Vec<InfElem>,
}

#[derive(Clone, Debug)]
pub struct PeriodSymbol {
    pub point: String,
    pub value: InfElem,
}

/// P(ξ₁, ξ₂) = π̃^{1/[K:F_q(t)]}·p(ξ₁, Φ₂⁰)^{1/[K:K⁺]}, kept symbolic.
#[derive(Clone, Debug, Serialize)]
pub struct ExtendedSymbol {
    pub xi1: String,
    pub xi2: String,
    pub pitilde_exponent: Rat,
    pub root_index: usize,
    pub residual: InfElemJson,
}

/// CM dual t-motive M_{(0,h)} with basis 1, y, …, y^{r−1} (or the ℓ components).
#[derive(Clone, Debug)]
pub struct DualMotive {
    pub cm: CMField,
    pub ring: CoeffRing,
    pub basis: Vec<String>,
    /// σ(e_i) = Σ_j Φ_ij e_j.
    pub phi: RMat,
    pub xi: CMDivisor,
    pub pair: ShtukaPair,
}

#[derive(Clone, Debug, Serialize)]
pub struct MotiveJson {
    pub model: String,
    pub ring: String,
    pub rank: usize,
    pub basis: Vec<String>,
    pub xi: CMDivisor,
    pub w: CMDivisor,
    pub h: String,
    pub twist: u32,
    pub ledger: ShtukaLedger,
    pub phi: Vec<Vec<String>>,
    pub det: DetReport,
}

/// Coordinates of a polynomial in y over R[t] in the basis 1, …, y^{r−1}.
fn reduce_y(cm: &CMField, ring: &CoeffRing, mut p: Vec<RPoly>) -> Vec<RPoly> {
    let f = &ring.field;
    let r = cm.model.degree();
    let m: Vec<RPoly> = cm.model.m_coeffs(f).iter().map(|c| RPoly::from_fq(ring, c)).collect();
    while p.len() > r {
        let top = p.pop().unwrap();
        let k = p.len() - r;
        for (j, mj) in m.iter().enumerate().take(r) {
            p[k + j] = p[k + j].sub(&top.mul(mj));
        }
    }
    p.resize(r, RPoly::zero(ring));
    p
}

fn poly_y_mul(a: &[RPoly], b: &[RPoly], ring: &CoeffRing) -> Vec<RPoly> {
    let mut out = vec![RPoly::zero(ring); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

impl DualMotive {
    /// Φ from h (entries are coordinates of h·y^k); Ξ is recorded, not re-derived.
    pub fn from_pair(cm: &CMField, pair: &ShtukaPair, xi: &CMDivisor) -> Result<Self> {
        let ring = pair.ring.clone();
        let r = cm.model.degree();
        let phi: RMat = match &pair.h {
            ShtukaFunction::Components(m) => {
                let tm = RPoly::t_minus(&ring, &ring.theta());
                let mut phi = vec![vec![RPoly::zero(&ring); r]; r];
                for i in 0..r {
                    let j = (i + 1) % r;
                    let e = u32::try_from(m[j]).map_err(|_| Error::InvalidArgument("negative multiplicity".into()))?;
                    phi[i][j] = tm.pow(e);
                }
                phi
            }
            ShtukaFunction::Poly(h) => {
                let hy: Vec<RPoly> = h.iter().map(|a| RPoly::constant(&ring, a.clone())).collect();
                (0..r)
                    .map(|k| {
                        let mut p = vec![RPoly::zero(&ring); k];
                        p.extend(hy.iter().cloned());
                        reduce_y(cm, &ring, p)
                    })
                    .collect()
            }
        };
        let basis = match cm.model.kind {
            ModelKind::ConstExt => (0..r).map(|i| format!("e{i}")).collect(),
            _ => (0..r).map(|k| if k == 0 { "1".into() } else if k == 1 { "y".into() } else { format!("y^{k}") }).collect(),
        };
        let m = DualMotive { cm: cm.clone(), ring, basis, phi, xi: xi.clone(), pair: pair.clone() };
        if m.phi.iter().flatten().any(|e| e.coeffs().iter().any(|c| c.field() != &m.ring.field)) {
            return Err(Error::BasisExpansionFailure("Φ left the coefficient ring".into()));
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        self.phi.len()
    }

    pub fn det(&self) -> RPoly {
        rdet(&self.phi, &self.ring)
    }

    /// det Φ = c(t − θ)^n with n = deg Ξ.
    pub fn det_check(&self) -> DetReport {
        let d = self.det();
        let theta = self.ring.theta();
        let mut exponent = None;
        if let Some(n) = d.ord_at(&theta) {
            let mut q = d.clone();
            for _ in 0..n {
                q = q.div_linear(&theta).0;
            }
            if q.deg_t() == Some(0) {
                exponent = Some(n);
            }
        }
        let expected = self.xi.degree();
        DetReport { det: d.render(), exponent, expected, pass: exponent == Some(expected as usize) }
    }

    fn in_sigma_m(&self, v: &[RPoly], adj: &RMat, det: &RPoly) -> Result<bool> {
        let r = self.rank();
        for j in 0..r {
            let mut s = RPoly::zero(&self.ring);
            for (i, vi) in v.iter().enumerate() {
                s = s.add(&vi.mul(&adj[i][j]));
            }
            if !s.divisible_by(det)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether (t − θ)^n·M ⊆ σM.
    pub fn contains_t_minus_theta_power(&self, n: u32) -> Result<bool> {
        let adj = radj(&self.phi, &self.ring);
        let det = self.det();
        let tm = RPoly::t_minus(&self.ring, &self.ring.theta()).pow(n);
        for j in 0..self.rank() {
            let mut v = vec![RPoly::zero(&self.ring); self.rank()];
            v[j] = tm.clone();
            if !self.in_sigma_m(&v, &adj, &det)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// σM = I_Ξ·M by containment of generators in both directions.
    pub fn sigma_ideal_check(&self, xi: &CMDivisor) -> Result<SigmaReport> {
        let ring = &self.ring;
        let theta = ring.theta();
        let r = self.rank();
        let (a, b) = match &self.pair.h {
            ShtukaFunction::Components(_) => {
                // Φ is monomial: column j carries the whole of σM in component j
                let mut a = true;
                let mut b = true;
                for (j, p) in self.cm.points.iter().enumerate() {
                    let want = xi.get(&p.label) as usize;
                    let col: Vec<&RPoly> = (0..r).map(|i| &self.phi[i][j]).filter(|e| !e.is_zero()).collect();
                    if col.len() != 1 {
                        return Ok(SigmaReport { ideal_in_sigma: false, sigma_in_ideal: false, pass: false });
                    }
                    let k = col[0].ord_at(&theta).unwrap_or(0);
                    let mut unit = col[0].clone();
                    for _ in 0..k {
                        unit = unit.div_linear(&theta).0;
                    }
                    let is_unit = unit.deg_t() == Some(0) && unit.coeff(0).degree() == Some(0);
                    a &= is_unit && k <= want;
                    b &= k >= want;
                }
                (a, b)
            }
            ShtukaFunction::Poly(h) => {
                let adj = radj(&self.phi, ring);
                let det = self.det();
                let tm = RPoly::t_minus(ring, &theta);
                let mut factors: Vec<(Vec<RPoly>, u32)> = Vec::new();
                for (i, p) in self.cm.points.iter().enumerate() {
                    let m = xi.get(&p.label);
                    if m > 0 {
                        let nu = ring.w().scale(ring.zetas[i]);
                        factors.push((vec![RPoly::constant(ring, nu.neg()), RPoly::constant(ring, ring.one())], m as u32));
                    }
                }
                // generators Π (t−θ)^{a_ξ}(y−ν_ξ)^{m_ξ−a_ξ}, times basis monomials
                let mut gens: Vec<Vec<RPoly>> = vec![vec![RPoly::constant(ring, ring.one())]];
                for (lin, m) in &factors {
                    let mut next = Vec::new();
                    for g in &gens {
                        for a in 0..=*m {
                            let mut p: Vec<RPoly> = g.iter().map(|x| x.mul(&tm.pow(a))).collect();
                            for _ in a..*m {
                                p = poly_y_mul(&p, lin, ring);
                            }
                            next.push(p);
                        }
                    }
                    gens = next;
                }
                let mut a = true;
                'outer: for g in &gens {
                    for k in 0..r {
                        let mut p = vec![RPoly::zero(ring); k];
                        p.extend(g.iter().cloned());
                        let v = reduce_y(&self.cm, ring, p);
                        if !self.in_sigma_m(&v, &adj, &det)? {
                            a = false;
                            break 'outer;
                        }
                    }
                }
                // h ∈ Π (y − ν_ξ)^{m_ξ} by synthetic division in R[y]
                let mut rest = h.clone();
                let mut b = true;
                'div: for (i, p) in self.cm.points.iter().enumerate() {
                    let nu = ring.w().scale(ring.zetas[i]);
                    for _ in 0..xi.get(&p.label) {
                        let n = rest.len();
                        if n < 2 {
                            b = false;
                            break 'div;
                        }
                        let mut q = vec![ring.zero(); n - 1];
                        let mut acc = ring.zero();
                        for j in (0..n).rev() {
                            acc = acc.mul(&nu).add(&rest[j]);
                            if j > 0 {
                                q[j - 1] = acc.clone();
                            }
                        }
                        if !acc.is_zero() {
                            b = false;
                            break 'div;
                        }
                        rest = q;
                    }
                }
                (a, b)
            }
        };
        Ok(SigmaReport { ideal_in_sigma: a, sigma_in_ideal: b, pass: a && b })
    }

    /// Elementary divisors of M/σM at (t − θ), negated.
    pub fn hodge_pink_weights(&self) -> Vec<i64> {
        let theta = self.ring.theta();
        let r = self.rank();
        let mut dets = vec![0i64];
        for k in 1..=r {
            let mut best: Option<usize> = None;
            let rows = subsets(r, k);
            for rs in &rows {
                for cs in &rows {
                    let minor: RMat =
                        rs.iter().map(|&i| cs.iter().map(|&j| self.phi[i][j].clone()).collect()).collect();
                    if let Some(o) = rdet(&minor, &self.ring).ord_at(&theta) {
                        best = Some(best.map_or(o, |b| b.min(o)));
                    }
                    if best == Some(0) {
                        break;
                    }
                }
                if best == Some(0) {
                    break;
                }
            }
            dets.push(best.map(|b| b as i64).unwrap_or(i64::MAX / 4));
        }
        let mut w: Vec<i64> = dets.windows(2).map(|p| -(p[1] - p[0])).collect();
        w.sort_unstable();
        w
    }

    pub fn hodge_pink_report(&self) -> HodgePinkReport {
        let weights = self.hodge_pink_weights();
        let mut expected: Vec<i64> = self.cm.points.iter().map(|p| -self.xi.get(&p.label)).collect();
        expected.sort_unstable();
        HodgePinkReport { pass: weights == expected, weights, expected }
    }

    /// ω_ξ on M/(t−θ)M: evaluation y ↦ ν_ξ (or the component projection).
    pub fn eigendifferentials(&self) -> Result<Vec<Eigendifferential>> {
        let r = self.rank();
        let pts = &self.cm.points;
        let out: Vec<Eigendifferential> = match self.cm.model.kind {
            ModelKind::ConstExt => {
                let like = &self.ring.w_inf;
                pts.iter()
                    .enumerate()
                    .map(|(i, p)| Eigendifferential {
                        point: p.label.clone(),
                        row: (0..r)
                            .map(|j| InfElem::from_int(like.field(), (i == j) as i64, like.e(), crate::infinity::EXACT))
                            .collect(),
                    })
                    .collect()
            }
            _ => pts
                .par_iter()
                .map(|p| {
                    let nu = p.nu.clone();
                    let mut row = vec![InfElem::one(nu.field(), nu.e(), crate::infinity::EXACT)];
                    for _ in 1..r {
                        let last = row.last().unwrap().mul(&nu);
                        row.push(last);
                    }
                    Eigendifferential { point: p.label.clone(), row }
                })
                .collect(),
        };
        let mat: Vec<Vec<InfElem>> = out.iter().map(|e| e.row.clone()).collect();
        let d = linalg::det(&mat)?;
        if d.is_zero() {
            return Err(Error::PrecisionExhausted("eigendifferentials are not independent at precision".into()));
        }
        Ok(out)
    }

    /// p(ξ) = ω_ξ(row 0 of Ψ^{-1}) at t = θ.
    pub fn period_symbols(&self, psi_inv: &TateMatrix) -> Result<Vec<PeriodSymbol>> {
        if psi_inv.size() != self.rank() {
            return Err(Error::InvalidArgument("Ψ^{-1} has the wrong size".into()));
        }
        let row: Vec<InfElem> =
            psi_inv.rows()[0].par_iter().map(|s| s.eval_theta()).collect::<Result<Vec<_>>>()?;
        let omegas = self.eigendifferentials()?;
        Ok(omegas
            .into_iter()
            .map(|om| {
                let mut acc = row[0].mul(&om.row[0]);
                for k in 1..row.len() {
                    acc = acc.add(&row[k].mul(&om.row[k]));
                }
                PeriodSymbol { point: om.point, value: acc }
            })
            .collect())
    }

    /// Symbolic bookkeeping for P(ξ₁, ξ₂) given p(ξ₁, Φ₂⁰).
    pub fn extended_symbol(&self, xi1: &str, xi2: &str, residual: &InfElem) -> Result<ExtendedSymbol> {
        self.cm.point(xi1)?;
        self.cm.point(xi2)?;
        Ok(ExtendedSymbol {
            xi1: xi1.into(),
            xi2: xi2.into(),
            pitilde_exponent: Rat::new(1, self.cm.model.degree() as i64),
            root_index: self.cm.model.cm_degree(),
            residual: residual.to_json(),
        })
    }

    /// Φ as a matrix over the Tate algebra, with w embedded in C_∞.
    pub fn phi_tate(&self, t: usize) -> Result<TateMatrix> {
        let rows = self
            .phi
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        let mut c = e.coeffs().iter().map(|a| self.ring.embed(a)).collect::<Result<Vec<_>>>()?;
                        if c.is_empty() {
                            c.push(self.ring.embed(&self.ring.zero())?);
                        }
                        Ok(TateSeries::from_poly(c, t))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TateMatrix::new(rows))
    }

    pub fn to_json(&self) -> MotiveJson {
        MotiveJson {
            model: self.cm.model.name.clone(),
            ring: self.ring.describe(),
            rank: self.rank(),
            basis: self.basis.clone(),
            xi: self.xi.clone(),
            w: self.pair.w.clone(),
            h: self.pair.h.render(),
            twist: self.pair.twist,
            ledger: self.pair.ledger.clone(),
            phi: self.phi.iter().map(|r| r.iter().map(|e| e.render()).collect()).collect(),
            det: self.det_check(),
        }
    }
}

/// Builds M_{(0,h)} and validates det Φ and the rank.
pub fn build_motive(cm: &CMField, pair: &ShtukaPair, xi: &CMDivisor) -> Result<DualMotive> {
    let m = DualMotive::from_pair(cm, pair, xi)?;
    if m.rank() != cm.model.degree() {
        return Err(Error::BasisExpansionFailure(format!("rank {} for [K:F_q(t)] = {}", m.rank(), cm.model.degree())));
    }
    let d = m.det_check();
    if !d.pass {
        return Err(Error::BasisExpansionFailure(format!("det Φ = {} is not c(t-θ)^{}", d.det, d.expected)));
    }
    Ok(m)
}

/// solve_shtuka followed by build_motive.
pub fn motive_for(cm: &CMField, xi: &CMDivisor) -> Result<DualMotive> {
    let pair = solve_shtuka(cm, xi)?;
    build_motive(cm, &pair, xi)
}

/// M₁ ⊗ M₂ over the coordinate ring: h = h₁h₂, Ξ = Ξ₁ + Ξ₂.
pub fn tensor_motives(a: &DualMotive, b: &DualMotive) -> Result<DualMotive> {
    if a.cm.model != b.cm.model {
        return Err(Error::ModelMismatch);
    }
    let xi = a.xi.add(&b.xi);
    let h = match (&a.pair.h, &b.pair.h) {
        (ShtukaFunction::Poly(x), ShtukaFunction::Poly(y)) => {
            let mut out = vec![a.ring.zero(); x.len() + y.len() - 1];
            for (i, u) in x.iter().enumerate() {
                for (j, v) in y.iter().enumerate() {
                    out[i + j] = out[i + j].add(&u.mul(v));
                }
            }
            ShtukaFunction::Poly(out)
        }
        (ShtukaFunction::Components(x), ShtukaFunction::Components(y)) => {
            ShtukaFunction::Components(x.iter().zip(y).map(|(u, v)| u + v).collect())
        }
        _ => return Err(Error::ModelMismatch),
    };
    let mut pair = a.pair.clone();
    pair.h = h;
    let inf = a.cm.reduction_at_infinity(&xi)?;
    pair.ledger = ShtukaLedger {
        zeros: xi.0.clone(),
        poles: inf.places,
        verified: a.pair.ledger.verified && b.pair.ledger.verified,
    };
    build_motive(&a.cm, &pair, &xi)
}
