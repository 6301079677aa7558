use super::elem::InfElem;
use crate::arith::{poly_roots_in_ext, splitting_field, FPoly, Fe, Var};
use crate::error::{Error, Result};
use crate::Rat;

/// Horner evaluation of Σ f_i y^i.
pub fn poly_eval(f: &[InfElem], y: &InfElem) -> InfElem {
    let mut acc = f.last().cloned().expect("empty polynomial");
    for c in f.iter().rev().skip(1) {
        acc = acc.mul(y).add(c);
    }
    acc
}

pub fn poly_derivative(f: &[InfElem]) -> Vec<InfElem> {
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(c.field().from_int(i as i64)))
        .collect()
}

/// Coefficients of f(c + z) in z.
pub fn taylor_shift(f: &[InfElem], c: &InfElem) -> Vec<InfElem> {
    let n = f.len();
    let p = f[0].field().p() as u64;
    // Pascal triangle mod p
    let mut binom = vec![vec![0u64; n]; n];
    for j in 0..n {
        binom[j][0] = 1;
        for k in 1..=j {
            binom[j][k] = (binom[j - 1][k - 1] + if k < j { binom[j - 1][k] } else { 0 }) % p;
        }
    }
    let mut cpow = vec![InfElem::one(c.field(), c.e(), super::EXACT)];
    for i in 1..n {
        cpow.push(cpow[i - 1].mul(c));
    }
    (0..n)
        .map(|k| {
            let mut acc: Option<InfElem> = None;
            for j in k..n {
                if binom[j][k] == 0 {
                    continue;
                }
                let fld = f[j].field().clone();
                let term = f[j].mul(&cpow[j - k]).scale(fld.from_int(binom[j][k] as i64));
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term),
                });
            }
            acc.unwrap_or_else(|| f[k].scale(Fe::ZERO))
        })
        .collect()
}

fn unify_all(f: &[InfElem]) -> Vec<InfElem> {
    let mut base = f[0].clone();
    for c in &f[1..] {
        base = InfElem::unify(&base, c).0;
    }
    f.iter().map(|c| InfElem::unify(c, &base).0).collect()
}

/// All roots of Σ f_i y^i in a ramified constant extension, each with multiplicity 1.
///
/// Roots are listed by increasing valuation, then by the discrete-log keys of their
/// coefficients. All roots share one (e, constant field).
pub fn newton_roots(f: &[InfElem]) -> Result<Vec<(InfElem, usize)>> {
    let mut f = unify_all(f);
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    if f.len() <= 1 {
        return Ok(vec![]);
    }
    let n = f.len() - 1;
    let roots = solve(f, None)?;
    if roots.len() != n {
        return Err(Error::PrecisionExhausted(format!("found {} of {} roots", roots.len(), n)));
    }
    let roots = unify_all(&roots);
    let mut keyed: Vec<(Vec<i64>, InfElem)> = roots.into_iter().map(|r| (root_key(&r), r)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    for w in keyed.windows(2) {
        if w[0].1.agrees_with(&w[1].1) {
            return Err(Error::PrecisionExhausted("roots coincide at working precision".into()));
        }
    }
    Ok(keyed.into_iter().map(|(_, r)| (r, 1)).collect())
}

fn root_key(r: &InfElem) -> Vec<i64> {
    let mut k = vec![r.order()];
    let f = r.field();
    for c in r.raw_coeffs().iter().take(64) {
        k.push(if c.is_zero() { -1 } else { f.dlog_key(*c) as i64 });
    }
    k
}

/// Lower convex hull of the Newton polygon (index, valuation).
fn lower_hull(pts: &[(usize, Rat)]) -> Vec<(usize, Rat)> {
    let mut h: Vec<(usize, Rat)> = Vec::new();
    for &p in pts {
        while h.len() >= 2 {
            let (a, b) = (h[h.len() - 2], h[h.len() - 1]);
            // drop b if it lies on or above segment a–p
            let lhs = (b.1 - a.1) * Rat::from((p.0 - a.0) as i64);
            let rhs = (p.1 - a.1) * Rat::from((b.0 - a.0) as i64);
            if lhs >= rhs {
                h.pop();
            } else {
                break;
            }
        }
        h.push(p);
    }
    h
}

/// Roots with valuation strictly greater than `min_val` (all roots when None).
fn solve(f: Vec<InfElem>, min_val: Option<Rat>) -> Result<Vec<InfElem>> {
    let n = f.len() - 1;
    let first_nz = f.iter().position(|c| !c.is_zero()).unwrap();
    let mut out = Vec::new();
    if first_nz > 0 {
        // roots too close to 0 to be resolved
        if first_nz > 1 {
            return Err(Error::PrecisionExhausted("clustered roots near a known root".into()));
        }
        let p = (f[0].prec() - f[1].order()).max(0);
        out.push(InfElem::zero(f[1].field(), f[1].e(), p));
    }
    let pts: Vec<(usize, Rat)> =
        (first_nz..=n).filter(|&i| !f[i].is_zero()).map(|i| (i, f[i].val().unwrap())).collect();
    let hull = lower_hull(&pts);
    // precision sanity for coefficients that vanish at precision
    for (i, c) in f.iter().enumerate().skip(first_nz) {
        if c.is_zero() {
            for w in hull.windows(2) {
                let (a, b) = (w[0], w[1]);
                if a.0 < i && i < b.0 {
                    let line = a.1 + (b.1 - a.1) * Rat::new((i - a.0) as i64, (b.0 - a.0) as i64);
                    if c.prec_val() < line {
                        return Err(Error::PrecisionExhausted("Newton polygon undetermined at precision".into()));
                    }
                }
            }
        }
    }
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mu = (a.1 - b.1) / Rat::from((b.0 - a.0) as i64);
        if let Some(m) = min_val {
            if mu <= m {
                continue;
            }
        }
        out.extend(segment_roots(&f, a.0, b.0, mu)?);
    }
    Ok(out)
}

fn segment_roots(f: &[InfElem], i0: usize, i1: usize, mu: Rat) -> Result<Vec<InfElem>> {
    let e0 = f[0].e() as i64;
    let mu_exp = mu * Rat::from(e0);
    let e = (e0 * mu_exp.denom()) as u32;
    let mut f: Vec<InfElem> = f.iter().map(|c| c.lift_e(e)).collect();
    let mu_exp = (mu * Rat::from(e as i64)).to_integer();
    let field = f[0].field().clone();
    let base_line = f[i0].order() + i0 as i64 * mu_exp;
    let mut phi = vec![Fe::ZERO; i1 - i0 + 1];
    for k in i0..=i1 {
        if !f[k].is_zero() && f[k].order() + k as i64 * mu_exp == base_line {
            phi[k - i0] = f[k].lead_coeff();
        }
    }
    let phi = FPoly::new(&field, phi, Var::X);
    let split = splitting_field(&phi, 24)?;
    if split != field {
        f = f.iter().map(|c| c.to_field(&split)).collect::<Result<_>>()?;
    }
    let rts = poly_roots_in_ext(&phi, &split, true)?;
    let max_rel = f.iter().map(|c| c.rel_prec().max(0)).max().unwrap_or(0);
    let y_prec = mu_exp + 2 * max_rel + 2;
    let mut out = Vec::new();
    for (c, mult) in rts {
        let y0 = InfElem::monomial(&split, c, mu_exp, e, y_prec);
        if mult == 1 {
            out.push(hensel(&f, y0)?);
        } else {
            let g = taylor_shift(&f, &y0);
            let sub = solve(g, Some(mu))?;
            if sub.len() != mult {
                return Err(Error::PrecisionExhausted("cannot separate clustered roots".into()));
            }
            out.extend(sub.into_iter().map(|z| y0.add(&z)));
        }
    }
    Ok(out)
}

fn hensel(f: &[InfElem], y0: InfElem) -> Result<InfElem> {
    let df = poly_derivative(f);
    let mut y = y0;
    for _ in 0..200 {
        let fy = poly_eval(f, &y);
        let dfy = poly_eval(&df, &y);
        if dfy.is_zero() {
            return Err(Error::PrecisionExhausted("derivative vanishes at precision".into()));
        }
        let corr = fy.div(&dfy)?;
        if corr.is_zero() {
            return Ok(y.truncate(corr.prec()));
        }
        if let (Some(vc), Some(vy)) = (corr.leading_exponent(), y.leading_exponent()) {
            if vc <= vy {
                return Err(Error::PrecisionExhausted("Newton iteration left the residue disk".into()));
            }
        }
        y = y.sub(&corr);
    }
    Err(Error::PrecisionExhausted("Newton iteration did not settle".into()))
}
