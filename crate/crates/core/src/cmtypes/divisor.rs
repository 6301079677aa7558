use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::model::{Automorphism, CMFieldModel, ModelKind};
use super::points::{fiber_labels, jk_points, reduction_at_infinity, separable_at_theta, CMPoint, InfinityDivisor};
use crate::error::{Error, Result};
use crate::infinity::InfElem;
use crate::Rat;

/// Integer multiplicities on point labels; zero entries are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CMDivisor(pub BTreeMap<String, i64>);

impl CMDivisor {
    pub fn zero() -> Self {
        CMDivisor::default()
    }

    pub fn single(label: &str, m: i64) -> Self {
        let mut d = CMDivisor::zero();
        d.add_point(label, m);
        d
    }

    pub fn get(&self, label: &str) -> i64 {
        self.0.get(label).copied().unwrap_or(0)
    }

    pub fn add_point(&mut self, label: &str, m: i64) {
        let v = self.0.entry(label.to_string()).or_insert(0);
        *v += m;
        if *v == 0 {
            self.0.remove(label);
        }
    }

    pub fn add(&self, o: &CMDivisor) -> CMDivisor {
        let mut r = self.clone();
        for (k, &v) in &o.0 {
            r.add_point(k, v);
        }
        r
    }

    pub fn sub(&self, o: &CMDivisor) -> CMDivisor {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, c: i64) -> CMDivisor {
        let mut r = CMDivisor::zero();
        for (k, &v) in &self.0 {
            r.add_point(k, c * v);
        }
        r
    }

    pub fn degree(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.0.values().all(|&v| v >= 0)
    }

    /// Parses "xi1 + 2*xi2" (or a JSON object {"xi1": 1, ...}).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str::<BTreeMap<String, i64>>(s)
                .map(|m| {
                    let mut d = CMDivisor::zero();
                    for (k, v) in m {
                        d.add_point(&k, v);
                    }
                    d
                })
                .map_err(|e| Error::Parse(e.to_string()));
        }
        let mut d = CMDivisor::zero();
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                continue;
            }
            let (m, label) = match term.split_once('*') {
                Some((m, l)) => (m.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{term}: {e}")))?, l.trim()),
                None => (1, term),
            };
            d.add_point(label, m);
        }
        Ok(d)
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.0
            .iter()
            .map(|(k, &v)| if v == 1 { k.clone() } else { format!("{v}*{k}") })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Weight {
    Weight { wt: i64, generalized_cm_type: bool, cm_type: bool },
    NotInIk0,
}

impl Weight {
    pub fn wt(&self) -> Option<i64> {
        match self {
            Weight::Weight { wt, .. } => Some(*wt),
            Weight::NotInIk0 => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub formula: Rat,
    pub lattice_rank: usize,
    pub cm_types: usize,
    /// 1 + (q−2)/(q−1)·#(A/t)^× for the t-th cyclotomic family.
    pub cyclotomic: Option<i64>,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Xi0Certificate {
    pub xi0: CMDivisor,
    pub weight: Weight,
    pub galois_rank: usize,
    pub rank_ik0: usize,
    pub nondegenerate: bool,
}

/// A model together with its enumerated J_K.
#[derive(Clone, Debug)]
pub struct CMField {
    pub model: CMFieldModel,
    pub points: Vec<CMPoint>,
    pub fibers: Vec<String>,
}

impl CMField {
    pub fn new(model: CMFieldModel, prec: i64) -> Result<Self> {
        let points = jk_points(&model, prec)?;
        let fibers = fiber_labels(&points);
        Ok(CMField { model, points, fibers })
    }

    pub fn labels(&self) -> Vec<String> {
        self.points.iter().map(|p| p.label.clone()).collect()
    }

    pub fn point(&self, label: &str) -> Result<&CMPoint> {
        self.points
            .iter()
            .find(|p| p.label == label)
            .ok_or_else(|| Error::InvalidArgument(format!("{label} is not in J_K")))
    }

    fn check_support(&self, d: &CMDivisor) -> Result<()> {
        for k in d.0.keys() {
            self.point(k)?;
        }
        Ok(())
    }

    /// N_K = Σ_{ξ ∈ J_K} ξ.
    pub fn norm_divisor(&self) -> CMDivisor {
        let mut d = CMDivisor::zero();
        for p in &self.points {
            d.add_point(&p.label, 1);
        }
        d
    }

    fn fiber_sums(&self, d: &CMDivisor) -> Vec<i64> {
        self.fibers
            .iter()
            .map(|f| self.points.iter().filter(|p| &p.fiber == f).map(|p| d.get(&p.label)).sum())
            .collect()
    }

    /// wt(Φ) when all fiber sums of Φ agree.
    pub fn cm_weight(&self, d: &CMDivisor) -> Weight {
        let sums = self.fiber_sums(d);
        if d.0.keys().any(|k| self.point(k).is_err()) || sums.windows(2).any(|w| w[0] != w[1]) {
            return Weight::NotInIk0;
        }
        let wt = sums[0];
        let generalized = d.is_effective() && !d.is_zero();
        Weight::Weight { wt, generalized_cm_type: generalized, cm_type: generalized && wt == 1 }
    }

    /// Ξ as a sum of wt(Ξ) CM types, picking points greedily in label order.
    pub fn decompose_cm_type(&self, xi: &CMDivisor) -> Result<Vec<CMDivisor>> {
        match self.cm_weight(xi) {
            Weight::Weight { generalized_cm_type: true, .. } => {}
            _ => return Err(Error::InvalidArgument(format!("{} is not a generalized CM type", xi.render()))),
        }
        let mut rest = xi.clone();
        let mut out = Vec::new();
        let mut order: Vec<&CMPoint> = self.points.iter().collect();
        order.sort_by(|a, b| a.label.cmp(&b.label));
        while !rest.is_zero() {
            let mut t = CMDivisor::zero();
            for f in &self.fibers {
                let p = order
                    .iter()
                    .find(|p| &p.fiber == f && rest.get(&p.label) > 0)
                    .ok_or_else(|| Error::ConsistencyFailure("fiber exhausted early".into()))?;
                t.add_point(&p.label, 1);
            }
            rest = rest.sub(&t);
            out.push(t);
        }
        Ok(out)
    }

    fn require_unramified(&self) -> Result<()> {
        if separable_at_theta(&self.model)? {
            Ok(())
        } else {
            Err(Error::RamifiedAboveTheta)
        }
    }

    /// Pull-back from F_q(t): n·ξ_θ ↦ n·N_K.
    pub fn inflate_from_base(&self, d: &CMDivisor) -> Result<CMDivisor> {
        self.require_unramified()?;
        let n = d.get("xi_theta");
        if d.0.len() > usize::from(n != 0) {
            return Err(Error::InvalidArgument("divisor over F_q(t) must be supported on xi_theta".into()));
        }
        Ok(self.norm_divisor().scale(n))
    }

    /// Push-forward to F_q(t).
    pub fn restrict_to_base(&self, d: &CMDivisor) -> Result<CMDivisor> {
        self.require_unramified()?;
        self.check_support(d)?;
        Ok(CMDivisor::single("xi_theta", d.degree()))
    }

    /// Pull-back from K⁺ (fiber labels) to K.
    pub fn inflate_from_kplus(&self, d: &CMDivisor) -> Result<CMDivisor> {
        self.require_unramified()?;
        let mut out = CMDivisor::zero();
        for (f, &m) in &d.0 {
            if !self.fibers.contains(f) {
                return Err(Error::InvalidArgument(format!("{f} is not in J_K⁺")));
            }
            for p in self.points.iter().filter(|p| &p.fiber == f) {
                out.add_point(&p.label, m);
            }
        }
        Ok(out)
    }

    /// Push-forward to K⁺ along the fibers.
    pub fn restrict_to_kplus(&self, d: &CMDivisor) -> Result<CMDivisor> {
        self.require_unramified()?;
        let mut out = CMDivisor::zero();
        for (k, &m) in &d.0 {
            out.add_point(&self.point(k)?.fiber, m);
        }
        Ok(out)
    }

    pub fn reduction_at_infinity(&self, xi: &CMDivisor) -> Result<InfinityDivisor> {
        self.check_support(xi)?;
        reduction_at_infinity(&self.model, &self.points, &xi.0)
    }

    fn find_point(&self, v: &InfElem) -> Option<usize> {
        self.points.iter().position(|p| p.nu.agrees_with(v))
    }

    /// Permutations of J_K induced by the supplied automorphisms.
    pub fn galois_generators(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.points.len();
        let mut gens = Vec::new();
        for a in &self.model.automorphisms {
            let perm: Vec<usize> = match a {
                Automorphism::ConstFrobenius => {
                    if self.model.kind != ModelKind::ConstExt {
                        return Err(Error::GaloisDataInsufficient("constant Frobenius on a geometric model".into()));
                    }
                    (0..n).map(|i| (i + 1) % n).collect()
                }
                Automorphism::Scale { dlog } => {
                    let f = self.points[0].nu.field();
                    let eps = f.pow(f.base_generator(), *dlog);
                    (0..n)
                        .map(|i| {
                            self.find_point(&self.points[i].nu.scale(eps))
                                .ok_or_else(|| Error::GaloisDataInsufficient("y ↦ εy does not permute J_K".into()))
                        })
                        .collect::<Result<_>>()?
                }
                Automorphism::Invert => (0..n)
                    .map(|i| {
                        let inv = self.points[i].nu.inv()?;
                        self.find_point(&inv)
                            .ok_or_else(|| Error::GaloisDataInsufficient("y ↦ 1/y does not permute J_K".into()))
                    })
                    .collect::<Result<_>>()?,
            };
            let mut seen = perm.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != n {
                return Err(Error::GaloisDataInsufficient("automorphism is not a permutation of J_K".into()));
            }
            gens.push(perm);
        }
        Ok(gens)
    }

    /// The group generated by the supplied automorphisms, as permutations of J_K.
    pub fn galois_group(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.points.len();
        let gens = self.galois_generators()?;
        let id: Vec<usize> = (0..n).collect();
        let mut group: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(g) = frontier.pop() {
            for s in &gens {
                let h: Vec<usize> = (0..n).map(|i| s[g[i]]).collect();
                if group.insert(h.clone()) {
                    frontier.push(h);
                }
            }
        }
        let group: Vec<Vec<usize>> = group.into_iter().collect();
        let mut reach = vec![false; n];
        for g in &group {
            reach[g[0]] = true;
        }
        if reach.iter().any(|r| !r) {
            return Err(Error::GaloisDataInsufficient("supplied automorphisms do not act transitively on J_K".into()));
        }
        Ok(group)
    }

    fn vector(&self, d: &CMDivisor) -> Vec<i64> {
        self.points.iter().map(|p| d.get(&p.label)).collect()
    }

    /// rank_Z of the group generated by the Galois orbit of Ξ.
    pub fn galois_rank(&self, xi: &CMDivisor) -> Result<usize> {
        self.check_support(xi)?;
        let v = self.vector(xi);
        let orbit: BTreeSet<Vec<i64>> =
            self.galois_group()?.iter().map(|g| (0..v.len()).map(|i| v[g[i]]).collect()).collect();
        Ok(integer_rank(&orbit.into_iter().collect::<Vec<_>>()))
    }

    /// All CM types: one point per fiber.
    pub fn all_cm_types(&self) -> Vec<CMDivisor> {
        let mut out = vec![CMDivisor::zero()];
        for f in &self.fibers {
            let mut next = Vec::new();
            for d in &out {
                for p in self.points.iter().filter(|p| &p.fiber == f) {
                    let mut e = d.clone();
                    e.add_point(&p.label, 1);
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }

    /// rank I_K⁰ by the closed formula and by the lattice of all CM types.
    pub fn rank_ik0(&self) -> RankReport {
        let deg = self.model.degree() as i64;
        let c = self.model.cm_degree() as i64;
        let formula = Rat::from(1) + Rat::new(c - 1, c) * Rat::from(deg);
        let types = self.all_cm_types();
        let vecs: Vec<Vec<i64>> = types.iter().map(|d| self.vector(d)).collect();
        let lattice_rank = integer_rank(&vecs);
        let cyclotomic = self.model.name.starts_with("kummer-t").then(|| {
            let q = self.model.q as i64;
            1 + (q - 2) * (q - 1) / (q - 1)
        });
        let agree = formula.is_integer()
            && formula.to_integer() == lattice_rank as i64
            && cyclotomic.is_none_or(|c| c == lattice_rank as i64);
        RankReport { formula, lattice_rank, cm_types: types.len(), cyclotomic, agree }
    }

    /// Ξ₀ = [K:K⁺]ξ₀ + Σ_{ξ not over π(ξ₀)} ξ with its non-degeneracy certificate.
    pub fn nondegenerate_xi0(&self, xi0: &str) -> Result<Xi0Certificate> {
        let p0 = self.point(xi0)?;
        let mut d = CMDivisor::single(xi0, self.model.cm_degree() as i64);
        for p in self.points.iter().filter(|p| p.fiber != p0.fiber) {
            d.add_point(&p.label, 1);
        }
        let weight = self.cm_weight(&d);
        let galois_rank = self.galois_rank(&d)?;
        let rank = self.rank_ik0();
        let nondegenerate = matches!(weight, Weight::Weight { generalized_cm_type: true, .. })
            && rank.agree
            && galois_rank == rank.lattice_rank;
        Ok(Xi0Certificate { xi0: d, weight, galois_rank, rank_ik0: rank.lattice_rank, nondegenerate })
    }
}

/// Rank over Z (= over Q) by fraction-free elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    if a.is_empty() {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            for j in c + 1..cols {
                a[i][j] = (a[rank][c] * a[i][j] - a[i][c] * a[rank][j]) / prev;
            }
            a[i][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
    }
    rank
}
