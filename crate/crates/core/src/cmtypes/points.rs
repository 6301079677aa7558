use std::collections::BTreeMap;

use serde::Serialize;

use super::model::{CMFieldModel, ModelKind};
use crate::arith::{render_fe, FPoly, FieldDesc, RatFunc};
use crate::error::{Error, Result};
use crate::infinity::{newton_roots, InfElem, EXACT};

/// A point ξ ∈ J_K, recorded through ν_ξ(y).
#[derive(Clone, Debug)]
pub struct CMPoint {
    pub label: String,
    /// ν_ξ(y); for constant-extension models the image of the generator of F_{q^ℓ}.
    pub nu: InfElem,
    /// Label of π_{X/X⁺}(ξ) ∈ J_{K⁺}.
    pub fiber: String,
    /// Component index i (ν_ξ|_{F_{q^ℓ}} = Frob^{−i}) for constant-extension models.
    pub component: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaceWitness {
    /// Place of K⁺ above ∞ (leading terms of the K⁺ generator there).
    pub kplus_place: String,
    /// Places of K above it, as (ramification, residue degree).
    pub places: Vec<(u32, u32)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub model: String,
    pub pass: bool,
    pub totally_real: bool,
    pub kplus_places: usize,
    pub witnesses: Vec<PlaceWitness>,
    pub message: String,
}

fn in_laurent_base(x: &InfElem) -> bool {
    let e = x.e() as i64;
    let f = x.field();
    x.terms().all(|(k, c)| k.rem_euclid(e) == 0 && f.in_base(c))
}

fn product_poly(roots: &[&InfElem]) -> Vec<InfElem> {
    let like = roots[0];
    let one = InfElem::one(like.field(), like.e(), EXACT);
    let mut p = vec![one];
    for r in roots {
        let mut next = vec![InfElem::zero(like.field(), like.e(), EXACT); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(r));
        }
        p = next;
    }
    p
}

/// Ramification index of the place generated by a root: e over the gcd of exponents.
fn ramification(r: &InfElem) -> u32 {
    let mut g = r.e() as i64;
    for (k, _) in r.terms() {
        g = num_integer::gcd(g, k);
    }
    (r.e() as i64 / g.max(1)) as u32
}

/// Partition of the roots into Galois orbits over F_q((1/t)).
fn orbits(roots: &[InfElem], idx: &[usize]) -> Result<Vec<Vec<usize>>> {
    if idx.len() > 16 {
        return Err(Error::InvalidArgument("too many roots for orbit search".into()));
    }
    let mut remaining: Vec<usize> = idx.to_vec();
    let mut out = Vec::new();
    while let Some(&first) = remaining.first() {
        let rest: Vec<usize> = remaining[1..].to_vec();
        let mut best: Option<Vec<usize>> = None;
        let mut masks: Vec<u32> = (0..(1u32 << rest.len())).collect();
        masks.sort_by_key(|m| m.count_ones());
        for mask in masks {
            let mut sub = vec![first];
            sub.extend(rest.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i));
            let rs: Vec<&InfElem> = sub.iter().map(|&i| &roots[i]).collect();
            if product_poly(&rs).iter().all(in_laurent_base) {
                best = Some(sub);
                break;
            }
        }
        let orbit = best.ok_or_else(|| Error::PrecisionExhausted("no rational orbit found".into()))?;
        remaining.retain(|i| !orbit.contains(i));
        out.push(orbit);
    }
    Ok(out)
}

fn group_by_value(vals: &[InfElem]) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, v) in vals.iter().enumerate() {
        match groups.iter_mut().find(|g| vals[g[0]].agrees_with(v)) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    groups
}

/// Checks that K⁺ is totally real and every place of K⁺ above ∞ is non-split in K,
/// by Puiseux factorization of m(t, y) over F_q((1/t)). `prec` is in valuation units.
pub fn validate_cm_field(model: &CMFieldModel, prec: i64) -> Result<ValidationReport> {
    model.check_shape()?;
    let f = model.field()?;
    if model.kind == ModelKind::ConstExt {
        return Ok(ValidationReport {
            model: model.name.clone(),
            pass: true,
            totally_real: true,
            kplus_places: 1,
            witnesses: vec![PlaceWitness { kplus_place: "∞".into(), places: vec![(1, model.ell)] }],
            message: format!("K = F_q^{}(t): ∞ is inert of residue degree {}", model.ell, model.ell),
        });
    }
    let roots: Vec<InfElem> = newton_roots(&model.m_at(&f, prec)?)?.into_iter().map(|(r, _)| r).collect();
    let (groups, kvals) = match &model.kplus {
        Some(kp) => {
            let vals = roots.iter().map(|r| kp.generator.eval(r)).collect::<Result<Vec<_>>>()?;
            (group_by_value(&vals), Some(vals))
        }
        None => (vec![(0..roots.len()).collect()], None),
    };
    let mut totally_real = groups.len() == model.d();
    if let Some(v) = &kvals {
        totally_real &= groups.iter().all(|g| in_laurent_base(&v[g[0]]));
    }
    let mut witnesses = Vec::new();
    let mut split = false;
    for g in &groups {
        let orbs = orbits(&roots, g)?;
        let places: Vec<(u32, u32)> = orbs
            .iter()
            .map(|o| {
                let e = ramification(&roots[o[0]]);
                (e, o.len() as u32 / e)
            })
            .collect();
        split |= places.len() > 1;
        let label = match &kvals {
            Some(v) => v[g[0]].render(2),
            None => "∞".into(),
        };
        witnesses.push(PlaceWitness { kplus_place: label, places });
    }
    let pass = totally_real && !split;
    let message = if !totally_real {
        "K⁺ is not totally real at ∞".to_string()
    } else if split {
        "a place of K⁺ above ∞ splits in K".to_string()
    } else {
        "every place of K⁺ above ∞ is non-split in K".to_string()
    };
    Ok(ValidationReport {
        model: model.name.clone(),
        pass,
        totally_real,
        kplus_places: groups.len(),
        witnesses,
        message,
    })
}

fn trim(p: &mut Vec<RatFunc>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// gcd degree of two polynomials over F_q(θ).
fn gcd_degree(mut a: Vec<RatFunc>, mut b: Vec<RatFunc>) -> Result<usize> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        while a.len() >= b.len() {
            let c = a.last().unwrap().div(b.last().unwrap())?;
            let shift = a.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                a[i + shift] = a[i + shift].sub(&c.mul(bi));
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    Ok(a.len().saturating_sub(1))
}

/// Whether m(θ, y) is separable in y (θ unramified in K).
pub fn separable_at_theta(model: &CMFieldModel) -> Result<bool> {
    if model.kind == ModelKind::ConstExt {
        return Ok(true);
    }
    let f = model.field()?;
    let m: Vec<RatFunc> = model.m_coeffs(&f).into_iter().map(RatFunc::from_poly).collect();
    let dm: Vec<RatFunc> = m
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| RatFunc::from_poly(c.num.scale(f.from_int(k as i64))))
        .collect();
    Ok(gcd_degree(m, dm)? == 0)
}

/// The points of J_K with their fiber labels. `prec` is in valuation units.
pub fn jk_points(model: &CMFieldModel, prec: i64) -> Result<Vec<CMPoint>> {
    model.check_shape()?;
    let f = model.field()?;
    if model.kind == ModelKind::ConstExt {
        let big = f.extension(model.ell)?;
        let beta = big.x();
        return Ok((0..model.ell as usize)
            .map(|i| CMPoint {
                label: format!("xi{i}"),
                nu: InfElem::constant(&big, big.frobenius(beta, -(i as i64)), 1, EXACT),
                fiber: "xi_theta".into(),
                component: Some(i),
            })
            .collect());
    }
    let roots: Vec<InfElem> = newton_roots(&model.m_at(&f, prec)?)?.into_iter().map(|(r, _)| r).collect();
    if roots.len() != model.degree() {
        return Err(Error::PrecisionExhausted(format!("{} of {} points", roots.len(), model.degree())));
    }
    let fibers: Vec<String> = match &model.kplus {
        Some(kp) => {
            let vals = roots.iter().map(|r| kp.generator.eval(r)).collect::<Result<Vec<_>>>()?;
            let groups = group_by_value(&vals);
            let mut lab = vec![String::new(); roots.len()];
            for (j, g) in groups.iter().enumerate() {
                for &i in g {
                    lab[i] = format!("eta{}", j + 1);
                }
            }
            lab
        }
        None => vec!["xi_theta".into(); roots.len()],
    };
    Ok(roots
        .into_iter()
        .zip(fibers)
        .enumerate()
        .map(|(i, (nu, fiber))| CMPoint {
            label: if model.kind == ModelKind::Rational { "xi_theta".into() } else { format!("xi{}", i + 1) },
            nu,
            fiber,
            component: None,
        })
        .collect())
}

/// Labels of the fibers of J_K → J_{K⁺}, in order of first appearance.
pub fn fiber_labels(points: &[CMPoint]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for p in points {
        if !out.contains(&p.fiber) {
            out.push(p.fiber.clone());
        }
    }
    out
}

/// One term m_ξ·∞̄_ξ of I_Ξ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfinityTerm {
    pub point: String,
    pub place: String,
    pub multiplicity: i64,
    /// Residue of the local generator at the place under ν_ξ.
    pub residue: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfinityDivisor {
    pub places: BTreeMap<String, i64>,
    pub terms: Vec<InfinityTerm>,
}

impl InfinityDivisor {
    pub fn degree(&self) -> i64 {
        self.places.values().sum()
    }
}

fn infinite_places(model: &CMFieldModel, f: &FieldDesc) -> Result<(bool, FPoly)> {
    let par = model.param.as_ref().ok_or(Error::UnsupportedGenus)?;
    let p = par.num_poly(f);
    let q = par.den_poly(f);
    Ok((p.deg_i() > q.deg_i(), q))
}

/// I_Ξ = Σ m_ξ ∞̄_ξ: the place above ∞ met by the reduction of ν_ξ.
pub fn reduction_at_infinity(
    model: &CMFieldModel,
    points: &[CMPoint],
    xi: &BTreeMap<String, i64>,
) -> Result<InfinityDivisor> {
    let f = model.field()?;
    let mut places = BTreeMap::new();
    let mut terms = Vec::new();
    for (label, &m) in xi {
        if m == 0 {
            continue;
        }
        let pt = points
            .iter()
            .find(|p| &p.label == label)
            .ok_or_else(|| Error::InvalidArgument(format!("{label} is not in J_K")))?;
        let (place, residue) = if let Some(i) = pt.component {
            (format!("inf({i})"), render_fe(pt.nu.field(), pt.nu.lead_coeff()))
        } else {
            let (pole_at_inf, den) = infinite_places(model, &f)?;
            let nu = &pt.nu;
            let v = nu.val().ok_or_else(|| Error::PrecisionExhausted(format!("ν({label}) vanishes at precision")))?;
            let c = nu.lead_coeff();
            let res = render_fe(nu.field(), c);
            if v < 0.into() {
                if !pole_at_inf {
                    return Err(Error::ConsistencyFailure("y = ∞ is not above t = ∞".into()));
                }
                ("y=∞".to_string(), res)
            } else if v > 0.into() {
                if !den.coeff(0).is_zero() || den.is_zero() {
                    return Err(Error::ConsistencyFailure("y = 0 is not above t = ∞".into()));
                }
                ("y=0".to_string(), res)
            } else {
                let emb = f.embedding_into(nu.field())?;
                let dc = den.coeffs().iter().rev().fold(crate::arith::Fe::ZERO, |acc, &a| {
                    nu.field().add(nu.field().mul(acc, c), emb.apply(a))
                });
                if !dc.is_zero() {
                    return Err(Error::ConsistencyFailure(format!("y = {res} is not above t = ∞")));
                }
                (format!("y={res}"), res)
            }
        };
        *places.entry(place.clone()).or_insert(0) += m;
        terms.push(InfinityTerm { point: label.clone(), place, multiplicity: m, residue });
    }
    Ok(InfinityDivisor { places, terms })
}

