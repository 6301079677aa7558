use super::field::{Fe, FieldDesc};
use super::poly::{FPoly, Var};
use crate::error::{Error, Result};

/// Field homomorphism F_{p^a} → F_{p^b} determined by the image of the generator x.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub src: FieldDesc,
    pub dst: FieldDesc,
    images: Vec<Fe>,
}

impl Embedding {
    pub fn identity(f: &FieldDesc) -> Self {
        let x = f.x();
        let mut images = Vec::new();
        let mut c = f.one();
        for _ in 0..f.k() {
            images.push(c);
            c = f.mul(c, x);
        }
        Embedding { src: f.clone(), dst: f.clone(), images }
    }
    pub fn apply(&self, x: Fe) -> Fe {
        if self.src == self.dst {
            return x;
        }
        let d = &self.dst;
        let digits = self.src.digits(x);
        let mut acc = d.zero();
        for (i, &dg) in digits.iter().enumerate() {
            if dg != 0 {
                acc = d.add(acc, d.mul(d.from_int(dg as i64), self.images[i]));
            }
        }
        acc
    }
}

impl FieldDesc {
    /// Embedding of self into `target`: the generator goes to the root of the modulus
    /// with the least discrete-log index.
    pub fn embedding_into(&self, target: &FieldDesc) -> Result<Embedding> {
        if self == target {
            return Ok(Embedding::identity(self));
        }
        if self.p() != target.p() || !target.k().is_multiple_of(self.k()) {
            return Err(Error::FieldMismatch(format!("{self:?} does not embed into {target:?}")));
        }
        let modpoly = FPoly::new(
            target,
            self.modulus().iter().map(|&c| target.from_int(c as i64)).collect(),
            Var::X,
        );
        let roots = distinct_roots(&modpoly, target);
        let r = roots
            .into_iter()
            .min_by_key(|&r| target.dlog_key(r))
            .ok_or_else(|| Error::FieldMismatch("modulus has no root in target".into()))?;
        let mut images = Vec::new();
        let mut c = target.one();
        for _ in 0..self.k() {
            images.push(c);
            c = target.mul(c, r);
        }
        Ok(Embedding { src: self.clone(), dst: target.clone(), images })
    }
}

/// Distinct roots of f in its own coefficient field, sorted by discrete-log order.
pub fn distinct_roots(f: &FPoly, field: &FieldDesc) -> Vec<Fe> {
    if f.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    if f.coeff(0).is_zero() {
        out.push(field.zero());
    }
    if field.size() <= 1 << 16 {
        for x in field.elements() {
            if !x.is_zero() && f.eval(x).is_zero() {
                out.push(x);
            }
        }
    } else {
        let x = FPoly::var_poly(field, f.var());
        let fm = f.monic();
        let xq = x.powmod(field.size() as u128, &fm);
        let g = fm.gcd(&xq.sub(&x));
        let mut g = g;
        if g.coeff(0).is_zero() && !g.is_zero() {
            g = g.divrem(&x).0;
        }
        split_linear(&g, field, &mut out);
    }
    out.sort_by_key(|&r| field.dlog_key(r));
    out.dedup();
    out
}

/// Equal-degree splitting of a squarefree product of distinct linear factors.
fn split_linear(g: &FPoly, field: &FieldDesc, out: &mut Vec<Fe>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let m = g.monic();
            out.push(field.neg(m.coeff(0)));
        }
        Some(_) => {
            let x = FPoly::var_poly(field, g.var());
            let mut c = field.one();
            for _ in 0..field.size() {
                let h = x.add(&FPoly::constant(field, c, g.var()));
                let probe = if field.p() == 2 {
                    // trace of c·x
                    let cx = x.scale(c);
                    let mut acc = cx.rem(g);
                    let mut cur = acc.clone();
                    for _ in 1..field.k() {
                        cur = cur.mulmod(&cur, g);
                        acc = acc.add(&cur);
                    }
                    acc
                } else {
                    h.powmod(((field.size() - 1) / 2) as u128, g).sub(&FPoly::one(field, g.var()))
                };
                let d = g.gcd(&probe);
                let dd = d.degree().unwrap_or(0);
                if dd > 0 && dd < g.degree().unwrap() {
                    let (q, _) = g.divrem(&d);
                    split_linear(&d, field, out);
                    split_linear(&q, field, out);
                    return;
                }
                c = field.mul(c, field.generator());
            }
        }
    }
}

/// All roots of f lying in `target`, with multiplicities.
/// With `complete`, failing to find deg f roots (counted with multiplicity) is an error.
pub fn poly_roots_in_ext(f: &FPoly, target: &FieldDesc, complete: bool) -> Result<Vec<(Fe, usize)>> {
    assert!(!f.is_zero(), "roots of the zero polynomial");
    let g = if f.field() == target {
        f.clone()
    } else {
        let emb = f.field().embedding_into(target)?;
        f.map_coeffs(target, |c| emb.apply(c))
    };
    let roots = distinct_roots(&g, target);
    let mut out = Vec::new();
    for r in roots {
        let lin = FPoly::new(target, vec![target.neg(r), target.one()], g.var());
        let mut cur = g.clone();
        let mut mult = 0;
        while let Some(q) = cur.exact_div(&lin) {
            mult += 1;
            cur = q;
            if cur.degree().unwrap_or(0) == 0 {
                break;
            }
        }
        out.push((r, mult));
    }
    let found: usize = out.iter().map(|x| x.1).sum();
    let deg = g.degree().unwrap_or(0);
    if complete && found < deg {
        return Err(Error::TargetTooSmall { found, expected: deg });
    }
    Ok(out)
}

/// Least extension degree m' such that f splits completely over F_{q^{m·m'}}... returned
/// as the descriptor of the splitting field over the base q, searching m' up to `max_deg`.
pub fn splitting_field(f: &FPoly, max_deg: u32) -> Result<FieldDesc> {
    let base = f.field();
    for d in 1..=max_deg {
        let tgt = if d == 1 { base.clone() } else { base.extension(base.m() * d)? };
        if poly_roots_in_ext(f, &tgt, true).is_ok() {
            return Ok(tgt);
        }
    }
    Err(Error::TargetTooSmall { found: 0, expected: f.degree().unwrap_or(0) })
}
