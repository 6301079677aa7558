use serde::Serialize;

use super::module::{TModule, TwPoly};
use crate::arith::{FPoly, Fe, FieldDesc, Var};
use crate::error::{Error, Result};
use crate::infinity::{newton_roots, InfElem};
use crate::Rat;

/// Period lattice of a Drinfeld module: an F_q[θ]-basis of Ker exp_ρ.
#[derive(Clone, Debug)]
pub struct Lattice {
    /// Basis vectors (d-tuples), by decreasing valuation of the first coordinate.
    pub basis: Vec<Vec<InfElem>>,
    pub meta: LatticeMeta,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeMeta {
    /// Endomorphism whose torsion produced the periods ("t" or the CM generator).
    pub action: String,
    pub chain_depth: usize,
    pub candidates: usize,
    pub valuations: Vec<Rat>,
    /// val(exp_ρ(λ)) (or its precision) for each basis vector.
    pub exp_residuals: Vec<Rat>,
}

/// A compatible torsion chain x_1, …, x_n with ρ_a(x_{k+1}) = x_k and ρ_a(x_1) = 0.
#[derive(Clone, Debug)]
pub struct TorsionChain {
    pub points: Vec<InfElem>,
}

impl TModule {
    fn require_drinfeld(&self) -> Result<()> {
        if self.d() != 1 {
            return Err(Error::InvalidArgument("root finding for torsion needs d = 1".into()));
        }
        Ok(())
    }

    /// Solutions X of ρ_a(X) = x (the nonzero ones only when x = 0).
    fn preimages(&self, poly: &TwPoly, x: Option<&InfElem>) -> Result<Vec<InfElem>> {
        let q = self.field().q() as usize;
        let deg = q.pow((poly.len() - 1) as u32);
        let like = &poly[0][0][0];
        let zero = like.scale(Fe::ZERO).with_prec_exact(crate::infinity::EXACT);
        let mut f = vec![zero; deg + 1];
        let mut qk = 1usize;
        let wp = self.work_prec();
        for a in poly {
            f[qk] = a[0][0].truncate(wp);
            qk *= q;
        }
        match x {
            None => {
                f.remove(0);
            }
            Some(x) => f[0] = x.neg().truncate(wp),
        }
        Ok(newton_roots(&f)?.into_iter().map(|(r, _)| r).collect())
    }

    /// All a-torsion chains of length n for ρ_a = ρ_t (or the named CM action), root 0 included.
    pub fn torsion_points(&self, n: usize) -> Result<Vec<TorsionChain>> {
        self.require_drinfeld()?;
        let poly = self.rho_t().clone();
        let mut chains = vec![TorsionChain { points: vec![] }];
        for _ in 0..n {
            let mut next = Vec::new();
            for ch in &chains {
                let x = ch.points.last();
                let mut roots = match x {
                    None => {
                        let mut r = self.preimages(&poly, None)?;
                        let z = r.first().map(|p| p.scale(Fe::ZERO)).unwrap();
                        r.insert(0, z);
                        r
                    }
                    Some(x) if x.is_zero() => {
                        let mut r = self.preimages(&poly, None)?;
                        r.insert(0, x.clone());
                        r
                    }
                    Some(x) => self.preimages(&poly, Some(x))?,
                };
                for r in roots.drain(..) {
                    let mut p = ch.points.clone();
                    p.push(r);
                    next.push(TorsionChain { points: p });
                }
            }
            chains = next;
        }
        Ok(chains)
    }

    /// Period lattice from torsion of the CM action (if any, else of ρ_t), reduced over F_q[θ].
    pub fn period_lattice(&self) -> Result<Lattice> {
        self.require_drinfeld()?;
        let (action, poly) = match self.cm() {
            Some(c) => (c.name.clone(), c.rho.clone()),
            None => ("t".to_string(), self.rho_t().clone()),
        };
        let da = poly[0][0][0].clone();
        let mut level = self.preimages(&poly, None)?;
        level.reverse();
        let mut cands = Vec::new();
        let mut depth = 1;
        for x in &level {
            if let Ok(l) = self.log(std::slice::from_ref(x)) {
                cands.push(l[0].mul(&da));
            }
        }
        if cands.is_empty() {
            let mut x = level[0].clone();
            let mut scale = da.clone();
            loop {
                depth += 1;
                if depth > 8 {
                    return Err(Error::ChainNotConverging);
                }
                let mut pre = self.preimages(&poly, Some(&x))?;
                x = pre.pop().ok_or(Error::ChainNotConverging)?;
                scale = scale.mul(&da);
                if let Ok(l) = self.log(std::slice::from_ref(&x)) {
                    cands.push(l[0].mul(&scale));
                    break;
                }
            }
        }
        if self.cm().is_some() {
            let base: Vec<InfElem> = cands.clone();
            for l in base {
                let mut cur = l;
                for _ in 1..self.rank() {
                    cur = cur.mul(&da);
                    cands.push(cur.clone());
                }
            }
        }
        let ncand = cands.len();
        let basis = reduce_basis(cands)?;
        if basis.len() != self.rank() {
            return Err(Error::PrecisionExhausted(format!(
                "lattice reduction produced {} vectors for rank {}",
                basis.len(),
                self.rank()
            )));
        }
        let mut residuals = Vec::new();
        for l in &basis {
            let ex = self.exp(std::slice::from_ref(l))?;
            let v = ex[0].val_or_prec();
            if v < Rat::from(self.prec() - 15) {
                return Err(Error::ConsistencyFailure(format!("exp(λ) has valuation {v}")));
            }
            residuals.push(v);
        }
        Ok(Lattice {
            meta: LatticeMeta {
                action,
                chain_depth: depth,
                candidates: ncand,
                valuations: basis.iter().map(|l| l.val().unwrap()).collect(),
                exp_residuals: residuals,
            },
            basis: basis.into_iter().map(|l| vec![l]).collect(),
        })
    }
}

fn unify_all(v: &[InfElem]) -> Vec<InfElem> {
    let mut base = v[0].clone();
    for x in &v[1..] {
        base = InfElem::unify(&base, x).0;
    }
    v.iter().map(|x| InfElem::unify(x, &base).0).collect()
}

/// Elements of F_q inside the constant field, with their images in the field F_q itself.
fn base_pairs(big: &FieldDesc) -> Result<Vec<(Fe, Fe)>> {
    let small = FieldDesc::for_q(big.q())?;
    let emb = small.embedding_into(big)?;
    Ok(small.elements().map(|c| (emb.apply(c), c)).collect())
}

/// Finds c ∈ F_q^k with Σ c_j b_j = target (brute force over the small space).
fn fq_combination(target: Fe, gens: &[Fe], field: &FieldDesc, pairs: &[(Fe, Fe)]) -> Option<Vec<usize>> {
    let k = gens.len();
    let q = pairs.len();
    let total = q.checked_pow(k as u32)?;
    for idx in 0..total {
        let mut rem = idx;
        let mut acc = Fe::ZERO;
        let mut choice = Vec::with_capacity(k);
        for g in gens {
            let c = rem % q;
            rem /= q;
            acc = field.add(acc, field.mul(pairs[c].0, *g));
            choice.push(c);
        }
        if acc == target {
            return Some(choice);
        }
    }
    None
}

/// One reduction pass: cancels the leading term of v against θ^k-shifts of basis vectors.
/// Returns the (index, F_q digit index, k) steps applied.
fn reduce_step(v: &InfElem, basis: &[InfElem], pairs: &[(Fe, Fe)]) -> Option<Vec<(usize, usize, i64)>> {
    if v.is_zero() {
        return None;
    }
    let e = v.e() as i64;
    let vo = v.order();
    let usable: Vec<usize> = (0..basis.len())
        .filter(|&j| {
            let b = &basis[j];
            !b.is_zero() && b.order() >= vo && (b.order() - vo) % e == 0
        })
        .collect();
    if usable.is_empty() {
        return None;
    }
    let gens: Vec<Fe> = usable.iter().map(|&j| basis[j].lead_coeff()).collect();
    let choice = fq_combination(v.lead_coeff(), &gens, v.field(), pairs)?;
    Some(
        usable
            .iter()
            .zip(choice)
            .filter(|(_, c)| !pairs[*c].0.is_zero())
            .map(|(&j, c)| (j, c, (basis[j].order() - vo) / e))
            .collect(),
    )
}

fn apply_steps(v: &InfElem, basis: &[InfElem], steps: &[(usize, usize, i64)], pairs: &[(Fe, Fe)]) -> InfElem {
    let mut out = v.clone();
    for &(j, c, k) in steps {
        out = out.sub(&basis[j].scale(pairs[c].0).mul_theta_pow(k));
    }
    out
}

/// Valuation-greedy reduction of a spanning set to a reduced F_q[θ]-basis.
pub fn reduce_basis(cands: Vec<InfElem>) -> Result<Vec<InfElem>> {
    if cands.is_empty() {
        return Ok(vec![]);
    }
    let mut cands = unify_all(&cands);
    let pairs = base_pairs(cands[0].field())?;
    cands.sort_by_key(|b| std::cmp::Reverse(b.val_or_prec()));
    let mut basis: Vec<InfElem> = Vec::new();
    for c in cands {
        let mut v = c;
        while let Some(steps) = reduce_step(&v, &basis, &pairs) {
            v = apply_steps(&v, &basis, &steps, &pairs);
        }
        if v.is_zero() {
            continue;
        }
        basis.push(v);
        // re-reduce until no vector's leading term is spanned by the others
        loop {
            let mut changed = false;
            for i in 0..basis.len() {
                let others: Vec<InfElem> =
                    basis.iter().enumerate().map(|(j, b)| if j == i { b.scale(Fe::ZERO) } else { b.clone() }).collect();
                if let Some(steps) = reduce_step(&basis[i], &others, &pairs) {
                    basis[i] = apply_steps(&basis[i], &others, &steps, &pairs);
                    changed = true;
                }
            }
            basis.retain(|b| !b.is_zero());
            if !changed {
                break;
            }
        }
    }
    basis.sort_by_key(|b| std::cmp::Reverse(b.val_or_prec()));
    Ok(basis)
}

impl Lattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
    /// Coordinates of v over F_q[θ] in the basis, if v reduces to zero at precision.
    pub fn coordinates(&self, v: &InfElem) -> Result<Option<Vec<FPoly>>> {
        let mut all = self.basis.iter().map(|b| b[0].clone()).collect::<Vec<_>>();
        all.push(v.clone());
        let all = unify_all(&all);
        let (basis, v) = all.split_at(self.basis.len());
        let pairs = base_pairs(basis[0].field())?;
        let small = FieldDesc::for_q(basis[0].field().q())?;
        let mut coords = vec![FPoly::zero(&small, Var::Theta); basis.len()];
        let mut v = v[0].clone();
        while let Some(steps) = reduce_step(&v, basis, &pairs) {
            for &(j, c, k) in &steps {
                coords[j] = coords[j].add(&FPoly::monomial(&small, pairs[c].1, k as usize, Var::Theta));
            }
            v = apply_steps(&v, basis, &steps, &pairs);
        }
        Ok(v.is_zero().then_some(coords))
    }
}
