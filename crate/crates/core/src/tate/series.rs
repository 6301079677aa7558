use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infinity::{InfElem, InfElemJson};
use crate::Rat;

/// Declared lower bound on val(a_i) for the coefficients of a series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum Decay {
    None,
    /// a_i = 0 for i > deg.
    Polynomial { deg: usize },
    /// val(a_i) ≥ slope·i + offset.
    Linear { slope: Rat, offset: Rat },
    /// val(a_i) ≥ coef·base^i + offset (coef ≥ 0, base ≥ 1).
    Geometric { coef: Rat, base: i64, offset: Rat },
}

/// What a decay descriptor says about one coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Unknown,
    Vanishes,
    AtLeast(Rat),
}

impl Decay {
    pub fn bound(&self, i: usize) -> Bound {
        match self {
            Decay::None => Bound::Unknown,
            Decay::Polynomial { deg } => {
                if i > *deg {
                    Bound::Vanishes
                } else {
                    Bound::Unknown
                }
            }
            Decay::Linear { slope, offset } => Bound::AtLeast(*slope * Rat::from(i as i64) + offset),
            Decay::Geometric { coef, base, offset } => {
                // saturate: a smaller bound is still a valid bound
                let cap = 1i64 << 40;
                let mut pw = 1i64;
                for _ in 0..i {
                    if pw > cap / base.max(&1) {
                        break;
                    }
                    pw *= base;
                }
                let num = *coef.numer() as i128 * pw as i128;
                let den = *coef.denom() as i128;
                let v = if num / den > cap as i128 { Rat::from(cap) } else { Rat::new(num as i64, den as i64) };
                Bound::AtLeast(v + offset)
            }
        }
    }
    /// Decay of a^{(n)} given the decay of a.
    pub fn twist(&self, q: i64, n: i64) -> Decay {
        let f = if n >= 0 { Rat::from(q.pow(n as u32)) } else { Rat::new(1, q.pow((-n) as u32)) };
        match self {
            Decay::Linear { slope, offset } => Decay::Linear { slope: *slope * f, offset: *offset * f },
            Decay::Geometric { coef, base, offset } => Decay::Geometric { coef: *coef * f, base: *base, offset: *offset * f },
            d => d.clone(),
        }
    }
    fn shift_val(&self, v: Rat) -> Decay {
        match self {
            Decay::Linear { slope, offset } => Decay::Linear { slope: *slope, offset: *offset + v },
            Decay::Geometric { coef, base, offset } => Decay::Geometric { coef: *coef, base: *base, offset: *offset + v },
            d => d.clone(),
        }
    }
    /// Linear minorant (slope, offset) when available without coefficient data.
    fn linear(&self) -> Option<(Rat, Rat)> {
        match self {
            Decay::Linear { slope, offset } => Some((*slope, *offset)),
            Decay::Geometric { coef, base, offset } => Some((*coef * Rat::from(base - 1), *coef + offset)),
            _ => None,
        }
    }
}

/// Truncated power series Σ_{i<T} a_i t^i with InfElem coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TateSeries {
    coeffs: Vec<InfElem>,
    decay: Decay,
}

impl TateSeries {
    pub fn new(coeffs: Vec<InfElem>, decay: Decay) -> Self {
        assert!(!coeffs.is_empty(), "empty series");
        let mut base = coeffs[0].clone();
        for c in &coeffs[1..] {
            base = InfElem::unify(&base, c).0;
        }
        let coeffs = coeffs.iter().map(|c| InfElem::unify(c, &base).0).collect();
        TateSeries { coeffs, decay }
    }
    /// Polynomial in t, padded with exact zeros to T coefficients.
    pub fn from_poly(mut coeffs: Vec<InfElem>, t: usize) -> Self {
        let deg = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        let z = coeffs[0].scale(crate::Fe::ZERO).with_prec_exact(crate::infinity::EXACT);
        coeffs.truncate(t.max(1));
        while coeffs.len() < t {
            coeffs.push(z.clone());
        }
        TateSeries::new(coeffs, Decay::Polynomial { deg })
    }
    pub fn constant(c: InfElem, t: usize) -> Self {
        TateSeries::from_poly(vec![c], t)
    }
    pub fn t_len(&self) -> usize {
        self.coeffs.len()
    }
    pub fn coeffs(&self) -> &[InfElem] {
        &self.coeffs
    }
    pub fn coeff(&self, i: usize) -> &InfElem {
        &self.coeffs[i]
    }
    pub fn decay(&self) -> &Decay {
        &self.decay
    }
    pub fn with_decay(mut self, decay: Decay) -> Self {
        self.decay = decay;
        self
    }
    pub fn truncate_t(&self, t: usize) -> Self {
        TateSeries { coeffs: self.coeffs[..t.min(self.coeffs.len())].to_vec(), decay: self.decay.clone() }
    }
    /// Lowers every coefficient's precision to `prec` exponent units.
    pub fn truncate_prec(&self, prec: i64) -> Self {
        TateSeries { coeffs: self.coeffs.iter().map(|c| c.truncate(prec)).collect(), decay: self.decay.clone() }
    }
    fn lift_like(&self, o: &TateSeries) -> (Vec<InfElem>, Vec<InfElem>) {
        let (a, b) = InfElem::unify(&self.coeffs[0], &o.coeffs[0]);
        let la = self.coeffs.iter().map(|c| InfElem::unify(c, &b).0).collect();
        let lb = o.coeffs.iter().map(|c| InfElem::unify(c, &a).0).collect();
        (la, lb)
    }
    /// Linear minorant of the coefficient valuations with the given slope.
    fn minorant(&self, slope: Rat) -> Rat {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c.val().unwrap() - slope * Rat::from(i as i64))
            .min()
            .unwrap_or(Rat::from(0))
    }
    fn combine(&self, o: &TateSeries, mul: bool) -> Decay {
        match (&self.decay, &o.decay) {
            (Decay::None, _) | (_, Decay::None) => Decay::None,
            (Decay::Polynomial { deg: a }, Decay::Polynomial { deg: b }) => {
                Decay::Polynomial { deg: if mul { a + b } else { *a.max(b) } }
            }
            (x, y) => {
                let (sa, oa, sb, ob) = match (x.linear(), y.linear()) {
                    (Some((s1, o1)), Some((s2, o2))) => (s1, o1, s2, o2),
                    (Some((s1, o1)), None) => (s1, o1, s1, o.minorant(s1)),
                    (None, Some((s2, o2))) => (s2, self.minorant(s2), s2, o2),
                    (None, None) => unreachable!(),
                };
                let slope = sa.min(sb);
                let offset = if mul { oa + ob } else { oa.min(ob) };
                // a Polynomial factor contributes its whole minorant in the product
                Decay::Linear { slope, offset }
            }
        }
    }
    pub fn add(&self, o: &TateSeries) -> TateSeries {
        let t = self.t_len().min(o.t_len());
        let (a, b) = self.lift_like(o);
        let coeffs = (0..t).map(|i| a[i].add(&b[i])).collect();
        TateSeries { coeffs, decay: self.combine(o, false) }
    }
    pub fn neg(&self) -> TateSeries {
        TateSeries { coeffs: self.coeffs.iter().map(|c| c.neg()).collect(), decay: self.decay.clone() }
    }
    pub fn sub(&self, o: &TateSeries) -> TateSeries {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &TateSeries) -> TateSeries {
        let t = self.t_len().min(o.t_len());
        let (a, b) = self.lift_like(o);
        let da = degree_hint(&self.decay, t);
        let db = degree_hint(&o.decay, t);
        let coeffs: Vec<InfElem> = (0..t)
            .map(|n| {
                let mut acc: Option<InfElem> = None;
                for i in n.saturating_sub(db)..=n.min(da) {
                    let term = a[i].mul(&b[n - i]);
                    acc = Some(match acc {
                        None => term,
                        Some(x) => x.add(&term),
                    });
                }
                acc.unwrap_or_else(|| a[0].scale(crate::Fe::ZERO).with_prec_exact(crate::infinity::EXACT))
            })
            .collect();
        TateSeries { coeffs, decay: self.combine(o, true) }
    }
    pub fn scale(&self, x: &InfElem) -> TateSeries {
        TateSeries {
            coeffs: self.coeffs.iter().map(|c| c.mul(x)).collect(),
            decay: self.decay.shift_val(x.val_or_prec()),
        }
    }
    /// Multiplication by t^k (T unchanged).
    pub fn mul_t_pow(&self, k: usize) -> TateSeries {
        let t = self.t_len();
        let z = self.coeffs[0].scale(crate::Fe::ZERO).with_prec_exact(crate::infinity::EXACT);
        let mut coeffs = vec![z; k.min(t)];
        coeffs.extend(self.coeffs.iter().take(t.saturating_sub(k)).cloned());
        let kk = Rat::from(k as i64);
        let decay = match &self.decay {
            Decay::Polynomial { deg } => Decay::Polynomial { deg: deg + k },
            Decay::Linear { slope, offset } => Decay::Linear { slope: *slope, offset: *offset - *slope * kk },
            Decay::Geometric { coef, base, offset } => {
                let mut c = *coef;
                for _ in 0..k {
                    c /= Rat::from(*base);
                }
                Decay::Geometric { coef: c, base: *base, offset: *offset }
            }
            Decay::None => Decay::None,
        };
        TateSeries { coeffs, decay }
    }
    /// Coefficientwise q^n-Frobenius. Absolute precision scales by q^n (divided for n < 0).
    pub fn twist(&self, n: i64) -> Result<TateSeries> {
        let q = self.coeffs[0].field().q() as i64;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| if n >= 0 { Ok(c.frobenius_cap(n, i64::MAX)) } else { c.frobenius(n) })
            .collect::<Result<Vec<_>>>()?;
        Ok(TateSeries { coeffs, decay: self.decay.twist(q, n) })
    }
    /// Coefficientwise twist capped at absolute precision `cap` (exponent units).
    pub fn twist_cap(&self, n: i64, cap: i64) -> Result<TateSeries> {
        Ok(self.twist(n)?.truncate_prec(cap))
    }
    /// True when every recorded coefficient respects the declared decay.
    pub fn decay_ok(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| match self.decay.bound(i) {
            Bound::Unknown => true,
            Bound::Vanishes => c.is_zero(),
            Bound::AtLeast(b) => c.is_zero() || c.val().unwrap() >= b,
        })
    }
    /// Lower bound on val(a_i θ^i) over the unrecorded tail i ≥ T.
    pub fn tail_bound(&self) -> Result<Option<Rat>> {
        let t = self.t_len();
        match &self.decay {
            Decay::None => Err(Error::NoDecay("no decay descriptor declared".into())),
            Decay::Polynomial { deg } => {
                if *deg < t {
                    Ok(None)
                } else {
                    Err(Error::NoDecay(format!("polynomial of degree {deg} truncated at T={t}")))
                }
            }
            Decay::Linear { slope, offset } => {
                if *slope <= Rat::from(1) {
                    return Err(Error::NoDecay(format!("linear slope {slope} does not exceed 1")));
                }
                Ok(Some((*slope - 1) * Rat::from(t as i64) + offset))
            }
            Decay::Geometric { coef, base, .. } => {
                if *base < 2 || *coef <= Rat::from(0) {
                    return Err(Error::NoDecay("geometric descriptor does not grow".into()));
                }
                // c·b^i − i is increasing once c·b^i·(b−1) ≥ 1
                let mut best: Option<Rat> = None;
                for i in t..t + 64 {
                    if let Bound::AtLeast(b) = self.decay.bound(i) {
                        let v = b - Rat::from(i as i64);
                        best = Some(best.map_or(v, |x: Rat| x.min(v)));
                    }
                }
                Ok(best)
            }
        }
    }
    /// Σ a_i θ^i, with precision limited by the coefficients and the declared tail.
    pub fn eval_theta(&self) -> Result<InfElem> {
        let tail = self.tail_bound()?;
        let mut acc: Option<InfElem> = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            // a coefficient that vanishes at its precision is sharpened by the declared bound
            let c = match self.decay.bound(i) {
                Bound::Vanishes if c.is_zero() => continue,
                Bound::AtLeast(b) if c.is_zero() => {
                    let bp = (b * Rat::from(c.e() as i64)).ceil().to_integer();
                    InfElem::zero(c.field(), c.e(), c.prec().max(bp))
                }
                _ => c.clone(),
            };
            let term = c.mul_theta_pow(i as i64);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        let c0 = &self.coeffs[0];
        let mut acc = acc.unwrap_or_else(|| InfElem::zero(c0.field(), c0.e(), crate::infinity::EXACT));
        if let Some(tb) = tail {
            let e = acc.e() as i64;
            acc = acc.truncate((tb * Rat::from(e)).floor().to_integer());
        }
        Ok(acc)
    }
    /// Minimal valuation (or precision, for vanishing entries) over the window.
    pub fn min_val(&self) -> Rat {
        self.coeffs.iter().map(|c| c.val_or_prec()).min().unwrap()
    }

    pub fn to_json(&self) -> TateSeriesJson {
        TateSeriesJson { t: self.t_len(), decay: self.decay.clone(), coeffs: self.coeffs.iter().map(|c| c.to_json()).collect() }
    }
    pub fn from_json(j: &TateSeriesJson) -> Result<TateSeries> {
        let coeffs = j.coeffs.iter().map(InfElem::from_json).collect::<Result<Vec<_>>>()?;
        if coeffs.len() != j.t {
            return Err(Error::Parse("T does not match coefficient count".into()));
        }
        Ok(TateSeries::new(coeffs, j.decay.clone()))
    }
}

fn degree_hint(d: &Decay, t: usize) -> usize {
    match d {
        Decay::Polynomial { deg } => (*deg).min(t.saturating_sub(1)),
        _ => t.saturating_sub(1),
    }
}

/// TateSeries JSON schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TateSeriesJson {
    #[serde(rename = "T")]
    pub t: usize,
    pub decay: Decay,
    pub coeffs: Vec<InfElemJson>,
}
