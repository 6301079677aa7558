use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{Embedding, FPoly, Fe, FieldDesc, RatFunc};
use crate::error::{Error, Result};
use crate::Rat;

/// Element of F_{q^m}((u)), u = θ^{-1/e}, known modulo u^prec.
///
/// Coefficients are stored densely from the leading exponent `start`; exponents in
/// `[start + coeffs.len(), prec)` are zero and exponents `≥ prec` are unknown.
#[derive(Clone)]
pub struct InfElem {
    field: FieldDesc,
    e: u32,
    start: i64,
    coeffs: Vec<Fe>,
    prec: i64,
}

impl PartialEq for InfElem {
    /// Structural equality: same descriptor, ramification, precision and coefficients.
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.e == o.e && self.start == o.start && self.prec == o.prec && self.coeffs == o.coeffs
    }
}

impl fmt::Debug for InfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(6))
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

impl InfElem {
    /// Builds an element from coefficients of u^start, u^{start+1}, …, normalizing.
    pub fn from_coeffs(field: &FieldDesc, e: u32, start: i64, coeffs: Vec<Fe>, prec: i64) -> Self {
        let mut r = InfElem { field: field.clone(), e, start, coeffs, prec };
        r.normalize();
        r
    }
    fn normalize(&mut self) {
        let max_len = (self.prec - self.start).max(0) as usize;
        if self.coeffs.len() > max_len {
            self.coeffs.truncate(max_len);
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.start = self.prec;
            }
            Some(i) => {
                if i > 0 {
                    self.coeffs.drain(..i);
                    self.start += i as i64;
                }
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn zero(field: &FieldDesc, e: u32, prec: i64) -> Self {
        InfElem { field: field.clone(), e, start: prec, coeffs: vec![], prec }
    }
    pub fn monomial(field: &FieldDesc, c: Fe, exp: i64, e: u32, prec: i64) -> Self {
        InfElem::from_coeffs(field, e, exp, vec![c], prec)
    }
    pub fn constant(field: &FieldDesc, c: Fe, e: u32, prec: i64) -> Self {
        InfElem::monomial(field, c, 0, e, prec)
    }
    pub fn one(field: &FieldDesc, e: u32, prec: i64) -> Self {
        InfElem::constant(field, field.one(), e, prec)
    }
    pub fn from_int(field: &FieldDesc, n: i64, e: u32, prec: i64) -> Self {
        InfElem::constant(field, field.from_int(n), e, prec)
    }
    /// θ^k = u^{-k e}.
    pub fn theta_pow(field: &FieldDesc, k: i64, e: u32, prec: i64) -> Self {
        InfElem::monomial(field, field.one(), -k * e as i64, e, prec)
    }
    pub fn theta(field: &FieldDesc, e: u32, prec: i64) -> Self {
        InfElem::theta_pow(field, 1, e, prec)
    }
    /// Polynomial in θ (coefficients in `field` or a subfield embedded into it).
    pub fn from_poly(poly: &FPoly, field: &FieldDesc, e: u32, prec: i64) -> Result<Self> {
        let emb = poly.field().embedding_into(field)?;
        if poly.is_zero() {
            return Ok(InfElem::zero(field, e, prec));
        }
        let d = poly.degree().unwrap() as i64;
        let start = -d * e as i64;
        let mut coeffs = vec![Fe::ZERO; (d as usize) * e as usize + 1];
        for (i, &c) in poly.coeffs().iter().enumerate() {
            coeffs[((d - i as i64) * e as i64) as usize] = emb.apply(c);
        }
        Ok(InfElem::from_coeffs(field, e, start, coeffs, prec))
    }
    /// Expansion of a rational function of θ in u.
    pub fn from_ratfunc(rf: &RatFunc, field: &FieldDesc, e: u32, prec: i64) -> Result<Self> {
        let val = rf.val_inf().map(|v| v * e as i64).unwrap_or(prec);
        let extra = (rf.den.deg_i().max(0) * e as i64).max(0);
        let n = InfElem::from_poly(&rf.num, field, e, prec + extra + val.abs() + 1)?;
        let d = InfElem::from_poly(&rf.den, field, e, prec + extra + val.abs() + 1)?;
        Ok(n.div(&d)?.truncate(prec))
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    /// Absolute precision in exponent units.
    pub fn prec(&self) -> i64 {
        self.prec
    }
    /// Absolute precision in valuation units.
    pub fn prec_val(&self) -> Rat {
        Rat::new(self.prec, self.e as i64)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// Leading exponent (None when zero at precision).
    pub fn leading_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.start)
    }
    /// Leading exponent, or the precision for elements that vanish at precision.
    pub fn order(&self) -> i64 {
        self.start
    }
    pub fn val(&self) -> Option<Rat> {
        self.leading_exponent().map(|s| Rat::new(s, self.e as i64))
    }
    /// Valuation, with elements zero at precision reporting their precision.
    pub fn val_or_prec(&self) -> Rat {
        Rat::new(self.start, self.e as i64)
    }
    pub fn lead_coeff(&self) -> Fe {
        self.coeffs.first().copied().unwrap_or(Fe::ZERO)
    }
    pub fn coeff(&self, k: i64) -> Fe {
        if k < self.start {
            return Fe::ZERO;
        }
        self.coeffs.get((k - self.start) as usize).copied().unwrap_or(Fe::ZERO)
    }
    /// Nonzero terms (exponent, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fe)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, &c)| (self.start + i as i64, c))
    }
    pub fn raw_coeffs(&self) -> &[Fe] {
        &self.coeffs
    }
    /// Relative precision in exponent units (None for zero).
    pub fn rel_prec(&self) -> i64 {
        self.prec - self.start
    }

    /// Lowers the absolute precision.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        InfElem::from_coeffs(&self.field, self.e, self.start, self.coeffs.clone(), prec)
    }
    /// Lowers the precision to at most `prec` valuation units.
    pub fn truncate_val(&self, prec: i64) -> Self {
        self.truncate(prec * self.e as i64)
    }
    /// Replaces the precision by a larger one, declaring unknown terms zero (exact inputs only).
    pub fn with_prec_exact(&self, prec: i64) -> Self {
        let mut r = self.clone();
        if r.is_zero() {
            r.start = prec;
        }
        r.prec = prec;
        r.normalize();
        r
    }

    /// Re-expresses in u' = θ^{-1/e'} for e' a multiple of e.
    pub fn lift_e(&self, e2: u32) -> Self {
        if e2 == self.e {
            return self.clone();
        }
        assert!(e2.is_multiple_of(self.e), "ramification {} does not divide {}", self.e, e2);
        let f = (e2 / self.e) as i64;
        let mut coeffs = vec![Fe::ZERO; if self.coeffs.is_empty() { 0 } else { (self.coeffs.len() - 1) * f as usize + 1 }];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * f as usize] = c;
        }
        InfElem { field: self.field.clone(), e: e2, start: self.start.saturating_mul(f), coeffs, prec: self.prec.saturating_mul(f) }
    }
    pub fn map_field(&self, emb: &Embedding) -> Self {
        assert!(emb.src == self.field, "embedding source mismatch");
        InfElem {
            field: emb.dst.clone(),
            e: self.e,
            start: self.start,
            coeffs: self.coeffs.iter().map(|&c| emb.apply(c)).collect(),
            prec: self.prec,
        }
    }
    /// Moves into `field` (must contain the current constant field).
    pub fn to_field(&self, field: &FieldDesc) -> Result<Self> {
        if &self.field == field {
            return Ok(self.clone());
        }
        Ok(self.map_field(&self.field.embedding_into(field)?))
    }
    /// Brings both operands to a common ramification index and constant field.
    pub fn unify(a: &InfElem, b: &InfElem) -> (InfElem, InfElem) {
        let e = a.e.lcm(&b.e);
        let (mut x, mut y) = (a.lift_e(e), b.lift_e(e));
        if x.field != y.field {
            let f = common_field(&x.field, &y.field).expect("incompatible constant fields");
            x = x.to_field(&f).unwrap();
            y = y.to_field(&f).unwrap();
        }
        (x, y)
    }

    pub fn add(&self, o: &InfElem) -> InfElem {
        if self.e != o.e || self.field != o.field {
            let (a, b) = InfElem::unify(self, o);
            return a.add(&b);
        }
        let f = &self.field;
        let prec = self.prec.min(o.prec);
        let lo = self.start.min(o.start).min(prec);
        let ext = |x: &InfElem| if x.is_zero() { i64::MIN } else { x.start + x.coeffs.len() as i64 };
        let end = ext(self).max(ext(o)).min(prec).max(lo);
        let len = (end - lo).max(0) as usize;
        let mut v = vec![Fe::ZERO; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = (self.start - lo) as usize + i;
            if k < len {
                v[k] = c;
            }
        }
        for (i, &c) in o.coeffs.iter().enumerate() {
            let k = (o.start - lo) as usize + i;
            if k < len {
                v[k] = f.add(v[k], c);
            }
        }
        InfElem::from_coeffs(f, self.e, lo, v, prec)
    }
    pub fn neg(&self) -> InfElem {
        let f = &self.field;
        InfElem { coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(), ..self.clone() }
    }
    pub fn sub(&self, o: &InfElem) -> InfElem {
        self.add(&o.neg())
    }
    pub fn scale(&self, c: Fe) -> InfElem {
        let f = &self.field;
        InfElem::from_coeffs(f, self.e, self.start, self.coeffs.iter().map(|&x| f.mul(x, c)).collect(), self.prec)
    }
    /// Multiplication by θ^k (exact shift).
    pub fn mul_theta_pow(&self, k: i64) -> InfElem {
        let s = k * self.e as i64;
        InfElem { start: self.start - s, prec: self.prec - s, ..self.clone() }
    }
    /// Multiplication by u^k (exact shift).
    pub fn shift_u(&self, k: i64) -> InfElem {
        InfElem { start: self.start + k, prec: self.prec + k, ..self.clone() }
    }
    pub fn mul(&self, o: &InfElem) -> InfElem {
        if self.e != o.e || self.field != o.field {
            let (a, b) = InfElem::unify(self, o);
            return a.mul(&b);
        }
        let prec = (self.prec.saturating_add(o.start)).min(o.prec.saturating_add(self.start));
        if self.is_zero() || o.is_zero() {
            return InfElem::zero(&self.field, self.e, prec);
        }
        let start = self.start + o.start;
        let len = ((prec - start).max(0) as usize).min(self.coeffs.len() + o.coeffs.len() - 1);
        let v = self.field.convolve(&self.coeffs, &o.coeffs, len);
        InfElem::from_coeffs(&self.field, self.e, start, v, prec)
    }
    /// Inverse of a unit series c_0 + c_1 u + … to `len` terms (Newton iteration).
    fn inv_series(field: &FieldDesc, b: &[Fe], len: usize) -> Vec<Fe> {
        let mut x = vec![field.inv(b[0])];
        let mut cur = 1usize;
        while cur < len {
            let next = (cur * 2).min(len);
            let bx = field.convolve(&b[..b.len().min(next)], &x, next);
            // 2 - b x
            let mut t: Vec<Fe> = bx.iter().map(|&c| field.neg(c)).collect();
            t.resize(next, Fe::ZERO);
            t[0] = field.add(t[0], field.from_int(2));
            x = field.convolve(&x, &t, next);
            x.resize(next, Fe::ZERO);
            cur = next;
        }
        x.truncate(len);
        x
    }
    pub fn inv(&self) -> Result<InfElem> {
        if self.is_zero() {
            return Err(Error::DivisionByApparentZero);
        }
        if self.prec >= super::EXACT / 2 {
            if self.coeffs.len() == 1 {
                let c = self.field.inv(self.coeffs[0]);
                return Ok(InfElem::monomial(&self.field, c, -self.start, self.e, super::EXACT));
            }
            return Err(Error::PrecisionExhausted("inverse of an exact non-monomial needs a precision bound".into()));
        }
        let r = self.rel_prec() as usize;
        let v = InfElem::inv_series(&self.field, &self.coeffs, r);
        Ok(InfElem::from_coeffs(&self.field, self.e, -self.start, v, -self.start + r as i64))
    }
    pub fn div(&self, o: &InfElem) -> Result<InfElem> {
        if self.e != o.e || self.field != o.field {
            let (a, b) = InfElem::unify(self, o);
            return a.div(&b);
        }
        if o.is_zero() {
            return Err(Error::DivisionByApparentZero);
        }
        if self.is_zero() {
            return Ok(InfElem::zero(&self.field, self.e, self.prec - o.start));
        }
        if o.prec >= super::EXACT / 2 && o.coeffs.len() == 1 {
            let c = self.field.inv(o.coeffs[0]);
            let s = self.scale(c);
            return Ok(InfElem { start: s.start - o.start, prec: s.prec.saturating_sub(o.start), ..s });
        }
        let r = self.rel_prec().min(o.rel_prec());
        if r >= super::EXACT / 2 {
            return Err(Error::PrecisionExhausted("quotient of exact elements needs a precision bound".into()));
        }
        let inv = InfElem::inv_series(&self.field, &o.coeffs, r as usize);
        let start = self.start - o.start;
        let v = self.field.convolve(&self.coeffs, &inv, r as usize);
        Ok(InfElem::from_coeffs(&self.field, self.e, start, v, start + r))
    }
    pub fn pow(&self, n: i64) -> Result<InfElem> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut r = InfElem::one(&self.field, self.e, super::EXACT);
        let mut k = n as u64;
        if k == 0 {
            return Ok(r);
        }
        let p = self.field.p() as u64;
        let mut v = 0;
        while k.is_multiple_of(p) {
            k /= p;
            v += 1;
        }
        let mut b = self.pow_p_abs(v);
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(r)
    }

    /// a^{p^v} with the full p^v scaling of absolute precision.
    fn pow_p_abs(&self, v: u32) -> InfElem {
        if v == 0 {
            return self.clone();
        }
        let pv = (self.field.p() as i64).pow(v);
        let f = &self.field;
        let prec = self.prec.saturating_mul(pv);
        if self.is_zero() {
            return InfElem::zero(f, self.e, prec);
        }
        let start = self.start * pv;
        let len = ((prec - start) as usize).min((self.coeffs.len() - 1) * pv as usize + 1);
        let mut c = vec![Fe::ZERO; len];
        for (i, &x) in self.coeffs.iter().enumerate() {
            c[i * pv as usize] = f.frobenius_p(x, v as i64);
        }
        InfElem::from_coeffs(f, self.e, start, c, prec)
    }

    /// a^{q^n}. For n ≥ 0 the relative precision is preserved (a valid truncation);
    /// for n < 0 all known exponents must be divisible by q^{|n|}.
    pub fn frobenius(&self, n: i64) -> Result<InfElem> {
        if n >= 0 {
            let qn = (self.field.q() as i64).pow(n as u32);
            if self.is_zero() {
                return Ok(InfElem::zero(&self.field, self.e, self.prec.saturating_mul(qn).min(super::EXACT)));
            }
            let cap = self.start * qn + self.rel_prec();
            Ok(self.frobenius_cap(n, cap))
        } else {
            let qn = (self.field.q() as i64).pow((-n) as u32);
            let f = &self.field;
            let mut coeffs = Vec::new();
            let mut start = None;
            for (k, c) in self.terms() {
                if k.rem_euclid(qn) != 0 {
                    return Err(Error::NotAPower(qn as u64));
                }
                let j = k / qn;
                let s = *start.get_or_insert(j);
                let idx = (j - s) as usize;
                coeffs.resize(idx + 1, Fe::ZERO);
                coeffs[idx] = f.frobenius(c, n);
            }
            let prec = ceil_div(self.prec, qn);
            Ok(match start {
                None => InfElem::zero(f, self.e, prec),
                Some(s) => InfElem::from_coeffs(f, self.e, s, coeffs, prec),
            })
        }
    }
    /// a^{q^n} (n ≥ 0) with absolute precision min(prec·q^n, cap).
    pub fn frobenius_cap(&self, n: i64, cap: i64) -> InfElem {
        assert!(n >= 0);
        let qn = (self.field.q() as i64).pow(n as u32);
        let f = &self.field;
        let prec = self.prec.saturating_mul(qn).min(cap).min(super::EXACT);
        if self.is_zero() {
            return InfElem::zero(f, self.e, prec);
        }
        let start = self.start * qn;
        let len = ((prec - start).max(0) as usize).min((self.coeffs.len() - 1) * qn as usize + 1);
        let mut v = vec![Fe::ZERO; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = i * qn as usize;
            if k >= len {
                break;
            }
            v[k] = f.frobenius(c, n);
        }
        InfElem::from_coeffs(f, self.e, start, v, prec)
    }

    /// Canonical n-th root (see module docs for the convention).
    pub fn nth_root(&self, n: u64) -> Result<InfElem> {
        if self.is_zero() {
            return Err(Error::PrecisionExhausted("n-th root of an element zero at precision".into()));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let p = self.field.p() as u64;
        let mut v = 0u32;
        let mut n1 = n;
        while n1.is_multiple_of(p) {
            n1 /= p;
            v += 1;
        }
        let mut a = self.clone();
        if v > 0 {
            let pv = p.pow(v);
            let f = &a.field;
            let coeffs = a.coeffs.iter().map(|&c| f.frobenius_p(c, -(v as i64))).collect();
            a = InfElem { field: f.clone(), e: a.e * pv as u32, start: a.start, coeffs, prec: a.prec };
        }
        if n1 == 1 {
            return Ok(a);
        }
        let g = a.start.gcd(&(n1 as i64)).max(1);
        let factor = (n1 as i64 / g) as u32;
        let mut a = a.lift_e(a.e * factor);
        // root of the leading coefficient
        let (root, field) = root_of_constant(&a.field, a.lead_coeff(), n1)?;
        if field != a.field {
            a = a.to_field(&field)?;
        }
        let f = a.field.clone();
        let lead = a.lead_coeff();
        let unit = InfElem::from_coeffs(
            &f,
            a.e,
            0,
            a.coeffs.iter().map(|&c| f.div(c, lead)).collect(),
            a.rel_prec(),
        );
        let x = unit_root(&unit, n1)?;
        let r = x.scale(root).shift_u(a.start / n1 as i64);
        Ok(r)
    }

    /// Renders the first `terms` nonzero terms.
    pub fn render(&self, terms: usize) -> String {
        if self.is_zero() {
            return format!("O(u^{}) [e={}]", self.prec, self.e);
        }
        let mut parts = Vec::new();
        for (k, c) in self.terms().take(terms) {
            parts.push(format!("{}·u^{}", crate::arith::render_fe(&self.field, c), k));
        }
        format!("{} + O(u^{}) [e={}]", parts.join(" + "), self.prec, self.e)
    }

    /// Equality of the known parts at the smaller of the two precisions.
    pub fn agrees_with(&self, o: &InfElem) -> bool {
        self.sub(o).is_zero()
    }

    pub fn to_json(&self) -> InfElemJson {
        InfElemJson {
            q: self.field.q(),
            m: self.field.m(),
            modulus: self.field.modulus().to_vec(),
            e: self.e,
            leading_exponent: self.leading_exponent(),
            coeffs: self.terms().map(|(k, c)| (k, self.field.digits(c))).collect(),
            prec_n: self.prec,
        }
    }
    pub fn from_json(j: &InfElemJson) -> Result<InfElem> {
        let (p, a) = crate::arith::prime_power(j.q).ok_or_else(|| Error::Parse("q is not a prime power".into()))?;
        let field = FieldDesc::new(p, a, j.m, j.modulus.clone())?;
        InfElem::from_json_in(j, &field)
    }
    pub fn from_json_in(j: &InfElemJson, field: &FieldDesc) -> Result<InfElem> {
        if j.coeffs.is_empty() {
            return Ok(InfElem::zero(field, j.e, j.prec_n));
        }
        let start = j.coeffs[0].0;
        let last = j.coeffs.last().unwrap().0;
        if last < start {
            return Err(Error::Parse("coefficient exponents must increase".into()));
        }
        let mut v = vec![Fe::ZERO; (last - start + 1) as usize];
        for (k, d) in &j.coeffs {
            if *k < start {
                return Err(Error::Parse("coefficient exponents must increase".into()));
            }
            v[(k - start) as usize] = field.from_digits(d);
        }
        Ok(InfElem::from_coeffs(field, j.e, start, v, j.prec_n))
    }
}

/// JSON schema of an InfElem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfElemJson {
    pub q: u64,
    pub m: u32,
    pub modulus: Vec<u32>,
    pub e: u32,
    pub leading_exponent: Option<i64>,
    pub coeffs: Vec<(i64, Vec<u32>)>,
    #[serde(rename = "prec_N")]
    pub prec_n: i64,
}

/// Smallest field over the same q containing both.
pub fn common_field(a: &FieldDesc, b: &FieldDesc) -> Result<FieldDesc> {
    if a == b {
        return Ok(a.clone());
    }
    if a.p() != b.p() || a.a() != b.a() {
        return Err(Error::FieldMismatch(format!("{a:?} vs {b:?}")));
    }
    if b.m().is_multiple_of(a.m()) {
        return Ok(b.clone());
    }
    if a.m().is_multiple_of(b.m()) {
        return Ok(a.clone());
    }
    a.extension(a.m().lcm(&b.m()))
}

/// Canonical n-th root of a nonzero constant, extending the field when needed.
pub fn root_of_constant(field: &FieldDesc, c: Fe, n: u64) -> Result<(Fe, FieldDesc)> {
    for d in 1..=16u32 {
        let f = if d == 1 { field.clone() } else { field.extension(field.m() * d)? };
        let emb = field.embedding_into(&f)?;
        let cc = emb.apply(c);
        let size = f.size();
        let g = n.gcd(&(size - 1));
        // x^n = cc solvable iff cc^{(size-1)/g} = 1
        if f.pow(cc, (size - 1) / g) != f.one() {
            continue;
        }
        let lc = f.dlog(cc).unwrap();
        let order = size - 1;
        // solutions l with n·l ≡ lc (mod order); least l is canonical
        let ng = n / g;
        let og = order / g;
        let inv = modinv((ng % og) as i64, og as i64);
        let l0 = ((lc / g) as u128 * inv as u128 % og as u128) as u64;
        return Ok((f.pow(f.generator(), l0), f));
    }
    Err(Error::InvalidField("constant root needs an extension beyond degree 16".into()))
}

fn modinv(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let g = a.extended_gcd(&m);
    g.x.rem_euclid(m)
}

/// (1 + β)^{1/n} for a unit series with constant term 1 and p ∤ n.
fn unit_root(b: &InfElem, n: u64) -> Result<InfElem> {
    let f = b.field().clone();
    let e = b.e();
    let prec = b.prec();
    let ninv = f.inv(f.from_int(n as i64));
    // y ↦ y + y(1 − b y^n)/n converges to b^{-1/n}
    let mut y = InfElem::one(&f, e, prec);
    for _ in 0..80 {
        let yn = y.pow(n as i64)?;
        let corr = InfElem::one(&f, e, prec).sub(&b.mul(&yn)).mul(&y).scale(ninv);
        if corr.is_zero() {
            break;
        }
        y = y.add(&corr).truncate(prec);
    }
    Ok(b.mul(&y.pow(n as i64 - 1)?).truncate(prec))
}
