use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of a finite field, stored as packed base-p digits
/// `Σ d_i p^i` of its coordinate vector in the power basis of the modulus.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const TABLE_LIMIT: u64 = 1 << 12;
const ADD_TABLE_LIMIT: u64 = 1 << 10;
const MAX_Q: u64 = 1 << 16;
const MAX_SIZE: u64 = 1 << 31;

struct Tables {
    log: Vec<u32>,
    exp: Vec<u32>,
    add: Option<Vec<u16>>,
}

struct FieldData {
    p: u32,
    a: u32,
    m: u32,
    k: u32,
    q: u64,
    size: u64,
    modulus: Vec<u32>,
    gen: Fe,
    pow_p: Vec<u32>,
    /// x^{k+j} mod modulus as digit vectors, j = 0..k-1
    red: Vec<Vec<u32>>,
    tables: Option<Tables>,
}

/// Descriptor of F_{q^m} with q = p^a, presented by a modulus of degree a·m over F_p.
#[derive(Clone)]
pub struct FieldDesc(Arc<FieldData>);

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.a == other.0.a
                && self.0.k == other.0.k
                && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FieldDesc {}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} (q={}, modulus {:?})", self.0.p, self.0.k, self.0.q, self.0.modulus)
    }
}

/// Serializable identity of a field descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub a: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---- dense polynomials over F_p on plain digit vectors (low degree first) ----

fn fp_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut r: Vec<u32> = prod.into_iter().map(|x| x as u32).collect();
    fp_rem(&mut r, f, p);
    r
}

fn fp_inv(x: u32, p: u32) -> u32 {
    modpow(x as u64, (p - 2) as u64, p as u64) as u32
}

fn fp_rem(r: &mut Vec<u32>, f: &[u32], p: u32) {
    fp_trim(r);
    let df = f.len() - 1;
    let lc_inv = fp_inv(f[df], p);
    while r.len() > df {
        let c = (*r.last().unwrap() as u64 * lc_inv as u64 % p as u64) as u32;
        let shift = r.len() - 1 - df;
        for (i, &fi) in f.iter().enumerate() {
            let s = (c as u64 * fi as u64) % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - s) % p as u64) as u32;
        }
        fp_trim(r);
    }
}

fn fp_powmod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut b = base.to_vec();
    fp_rem(&mut b, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = fp_mulmod(&result, &b, f, p);
        }
        b = fp_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    result
}

fn fp_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    fp_trim(&mut x);
    fp_trim(&mut y);
    while !y.is_empty() {
        fp_rem(&mut x, &y, p);
        std::mem::swap(&mut x, &mut y);
    }
    x
}

fn fp_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut r = vec![0u32; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        r[i] = (x + p - y) % p;
    }
    fp_trim(&mut r);
    r
}

pub(crate) fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Rabin irreducibility test over F_p.
fn fp_is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    let mut xp = x.clone();
    // x^{p^k} = x mod f
    let mut frobs = vec![x.clone()];
    for _ in 0..k {
        xp = fp_powmod(&xp, p as u64, f, p);
        frobs.push(xp.clone());
    }
    let mut xr = x.clone();
    fp_rem(&mut xr, f, p);
    if fp_sub(&frobs[k], &xr, p) != Vec::<u32>::new() {
        return false;
    }
    for r in prime_factors(k as u64) {
        let j = k / r as usize;
        let d = fp_sub(&frobs[j], &x, p);
        let g = fp_gcd(f, &d, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

impl FieldDesc {
    /// Builds F_{q^m}, q = p^a, from an explicit monic modulus of degree a·m over F_p
    /// (coefficients listed from the constant term up).
    pub fn new(p: u32, a: u32, m: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if a == 0 || m == 0 {
            return Err(Error::InvalidField("a and m must be positive".into()));
        }
        let k = a * m;
        let q = (p as u64).checked_pow(a).filter(|&q| q <= MAX_Q);
        let q = q.ok_or_else(|| Error::InvalidField("q exceeds 2^16".into()))?;
        let size = (p as u64)
            .checked_pow(k)
            .filter(|&s| s <= MAX_SIZE)
            .ok_or_else(|| Error::InvalidField("field size exceeds 2^31".into()))?;
        if modulus.len() != k as usize + 1 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField(format!("modulus must be monic of degree {k}")));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        if !fp_is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus(p));
        }
        let mut pow_p = vec![1u32; k as usize];
        for i in 1..k as usize {
            pow_p[i] = pow_p[i - 1] * p;
        }
        let mut red = Vec::new();
        let mut cur: Vec<u32> = vec![0; k as usize];
        // x^k = -(lower part of modulus)
        for i in 0..k as usize {
            cur[i] = (p - modulus[i]) % p;
        }
        for _ in 0..k.saturating_sub(1).max(1) {
            red.push(cur.clone());
            // multiply by x
            let top = cur[k as usize - 1];
            let mut next = vec![0u32; k as usize];
            for i in (1..k as usize).rev() {
                next[i] = cur[i - 1];
            }
            for i in 0..k as usize {
                next[i] = (next[i] + top * red[0][i]) % p;
            }
            cur = next;
        }
        let mut data = FieldData { p, a, m, k, q, size, modulus, gen: Fe(0), pow_p, red, tables: None };
        data.gen = find_generator(&data);
        if size <= TABLE_LIMIT {
            data.tables = Some(build_tables(&data));
        }
        Ok(FieldDesc(Arc::new(data)))
    }

    /// F_{q^m} with the lexicographically least monic primitive modulus.
    pub fn default_for(p: u32, a: u32, m: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let k = a * m;
        if k == 1 {
            let g = (1..p.max(2)).find(|&g| is_primitive_root(g as u64, p as u64)).unwrap_or(1);
            return FieldDesc::new(p, a, m, vec![(p - g % p) % p, 1]);
        }
        let total = (p as u64)
            .checked_pow(k)
            .filter(|&s| s <= MAX_SIZE)
            .ok_or_else(|| Error::InvalidField("field size exceeds 2^31".into()))?;
        let order = total - 1;
        let factors = prime_factors(order);
        for idx in 0..total {
            let mut f = Vec::with_capacity(k as usize + 1);
            let mut t = idx;
            for _ in 0..k {
                f.push((t % p as u64) as u32);
                t /= p as u64;
            }
            f.push(1);
            if f[0] == 0 || !fp_is_irreducible(&f, p) {
                continue;
            }
            let x = vec![0u32, 1];
            let primitive = factors.iter().all(|&r| fp_powmod(&x, order / r, &f, p) != vec![1u32]);
            if primitive {
                return FieldDesc::new(p, a, m, f);
            }
        }
        Err(Error::InvalidField("no primitive modulus found".into()))
    }

    /// Default descriptor for F_q itself.
    pub fn for_q(q: u64) -> Result<Self> {
        let (p, a) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        FieldDesc::default_for(p, a, 1)
    }

    /// Default descriptor for the degree-`m2` extension over the same q.
    pub fn extension(&self, m2: u32) -> Result<Self> {
        FieldDesc::default_for(self.0.p, self.0.a, m2)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        FieldDesc::new(spec.p, spec.a, spec.m, spec.modulus.clone())
    }
    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.0.p, a: self.0.a, m: self.0.m, modulus: self.0.modulus.clone() }
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn a(&self) -> u32 {
        self.0.a
    }
    pub fn m(&self) -> u32 {
        self.0.m
    }
    /// Degree over the prime field.
    pub fn k(&self) -> u32 {
        self.0.k
    }
    pub fn q(&self) -> u64 {
        self.0.q
    }
    pub fn size(&self) -> u64 {
        self.0.size
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    /// Recorded multiplicative generator.
    pub fn generator(&self) -> Fe {
        self.0.gen
    }
    pub fn same(&self, other: &FieldDesc) -> bool {
        self == other
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }
    pub fn one(&self) -> Fe {
        Fe(1)
    }
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }
    pub fn digits(&self, x: Fe) -> Vec<u32> {
        let p = self.0.p;
        let mut v = x.0;
        (0..self.0.k)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }
    pub fn from_digits(&self, d: &[u32]) -> Fe {
        let mut v = 0u32;
        for (i, &x) in d.iter().enumerate().take(self.0.k as usize) {
            v += (x % self.0.p) * self.0.pow_p[i];
        }
        Fe(v)
    }
    /// The class of the polynomial variable x.
    pub fn x(&self) -> Fe {
        if self.0.k == 1 {
            self.from_int(-(self.0.modulus[0] as i64))
        } else {
            Fe(self.0.p)
        }
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let d = &*self.0;
        if d.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if d.k == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= d.p { s - d.p } else { s });
        }
        if let Some(t) = d.tables.as_ref().and_then(|t| t.add.as_ref()) {
            return Fe(t[(a.0 as usize) * d.size as usize + b.0 as usize] as u32);
        }
        let mut x = a.0;
        let mut y = b.0;
        let mut r = 0u32;
        for i in 0..d.k as usize {
            let s = (x % d.p + y % d.p) % d.p;
            r += s * d.pow_p[i];
            x /= d.p;
            y /= d.p;
        }
        Fe(r)
    }
    pub fn neg(&self, a: Fe) -> Fe {
        let d = &*self.0;
        if d.p == 2 {
            return a;
        }
        if d.k == 1 {
            return Fe(if a.0 == 0 { 0 } else { d.p - a.0 });
        }
        let mut x = a.0;
        let mut r = 0u32;
        for i in 0..d.k as usize {
            let s = (d.p - x % d.p) % d.p;
            r += s * d.pow_p[i];
            x /= d.p;
        }
        Fe(r)
    }
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe(0);
        }
        let d = &*self.0;
        if d.k == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % d.p as u64) as u32);
        }
        if let Some(t) = &d.tables {
            return Fe(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]);
        }
        let da = self.digits(a);
        let db = self.digits(b);
        let mut acc = vec![0u64; 2 * d.k as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                acc[i + j] += x as u64 * y as u64;
            }
        }
        self.reduce_acc(&mut acc)
    }
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        let d = &*self.0;
        if let Some(t) = &d.tables {
            let n = (d.size - 1) as u32;
            let l = t.log[a.0 as usize];
            return Fe(t.exp[((n - l) % n) as usize]);
        }
        self.pow(a, d.size - 2)
    }
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }
    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe(1);
        }
        if a.is_zero() {
            return Fe(0);
        }
        let d = &*self.0;
        if let Some(t) = &d.tables {
            let n = d.size - 1;
            let l = t.log[a.0 as usize] as u64;
            let idx = ((l as u128 * (e % n) as u128) % n as u128) as usize;
            return Fe(t.exp[idx]);
        }
        let mut r = Fe(1);
        let mut b = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }
    /// Signed power; negative exponents invert.
    pub fn powi(&self, a: Fe, e: i64) -> Fe {
        if e >= 0 {
            self.pow(a, e as u64)
        } else {
            self.inv(self.pow(a, e.unsigned_abs()))
        }
    }
    /// x^{q^n}; n may be negative.
    pub fn frobenius(&self, x: Fe, n: i64) -> Fe {
        let d = &*self.0;
        let r = n.rem_euclid(d.m as i64) as u64;
        if r == 0 || x.is_zero() {
            return x;
        }
        let e = modpow(d.q, r, d.size - 1);
        let e = if e == 0 { d.size - 1 } else { e };
        self.pow(x, e)
    }
    /// x^{p^n} (absolute Frobenius).
    pub fn frobenius_p(&self, x: Fe, n: i64) -> Fe {
        let d = &*self.0;
        let r = n.rem_euclid(d.k as i64) as u64;
        if r == 0 || x.is_zero() {
            return x;
        }
        self.pow(x, modpow(d.p as u64, r, d.size - 1))
    }
    /// Discrete logarithm with respect to the recorded generator.
    pub fn dlog(&self, x: Fe) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        let d = &*self.0;
        if let Some(t) = &d.tables {
            return Some(t.log[x.0 as usize] as u64);
        }
        let n = d.size - 1;
        let msz = (n as f64).sqrt().ceil() as u64 + 1;
        let mut baby = std::collections::HashMap::with_capacity(msz as usize);
        let mut cur = Fe(1);
        for j in 0..msz {
            baby.entry(cur.0).or_insert(j);
            cur = self.mul(cur, d.gen);
        }
        let factor = self.inv(self.pow(d.gen, msz));
        let mut gamma = x;
        for i in 0..=msz {
            if let Some(&j) = baby.get(&gamma.0) {
                return Some((i * msz + j) % n);
            }
            gamma = self.mul(gamma, factor);
        }
        None
    }
    /// Elements ordered by discrete-log index (zero first).
    pub fn dlog_key(&self, x: Fe) -> u64 {
        self.dlog(x).map(|l| l + 1).unwrap_or(0)
    }
    /// Generator of the subfield F_q ⊂ F_{q^m}.
    pub fn base_generator(&self) -> Fe {
        let e = (self.0.size - 1) / (self.0.q - 1);
        self.pow(self.0.gen, e)
    }
    /// Elements of the subfield F_q, zero first then by discrete-log order.
    pub fn base_elements(&self) -> Vec<Fe> {
        let g = self.base_generator();
        let mut v = vec![Fe(0)];
        let mut c = Fe(1);
        for _ in 0..(self.0.q - 1) {
            v.push(c);
            c = self.mul(c, g);
        }
        v
    }
    /// F_p-basis 1, γ, …, γ^{a-1} of the subfield F_q.
    pub fn base_basis(&self) -> Vec<Fe> {
        let g = self.base_generator();
        let mut v = Vec::new();
        let mut c = Fe(1);
        for _ in 0..self.0.a {
            v.push(c);
            c = self.mul(c, g);
        }
        v
    }
    pub fn in_base(&self, x: Fe) -> bool {
        self.frobenius(x, 1) == x
    }
    /// All field elements (only for small fields).
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.size as u32).map(Fe)
    }

    fn reduce_acc(&self, acc: &mut [u64]) -> Fe {
        let d = &*self.0;
        let k = d.k as usize;
        let p = d.p as u64;
        for v in acc.iter_mut() {
            *v %= p;
        }
        let mut low = [0u64; 64];
        let lowv: &mut [u64] = if k <= 64 { &mut low[..k] } else { unreachable!() };
        for (i, v) in acc.iter().enumerate().take(k) {
            lowv[i] = *v;
        }
        for j in 0..acc.len().saturating_sub(k) {
            let c = acc[k + j];
            if c == 0 {
                continue;
            }
            for (i, r) in d.red[j].iter().enumerate() {
                lowv[i] += c * *r as u64;
            }
        }
        let mut out = 0u32;
        for i in 0..k {
            out += ((lowv[i] % p) as u32) * d.pow_p[i];
        }
        Fe(out)
    }

    /// Truncated product of two coefficient sequences: out[n] = Σ_{i+j=n} a_i b_j, n < len.
    pub fn convolve(&self, a: &[Fe], b: &[Fe], len: usize) -> Vec<Fe> {
        let d = &*self.0;
        let len = len.min((a.len() + b.len()).saturating_sub(1));
        if a.is_empty() || b.is_empty() || len == 0 {
            return vec![Fe(0); len];
        }
        let p = d.p as u64;
        if d.k == 1 {
            let limit = u64::MAX / ((p - 1) * (p - 1)).max(1) - 1;
            let mut out = vec![Fe(0); len];
            for (n, o) in out.iter_mut().enumerate() {
                let lo = n.saturating_sub(b.len() - 1);
                let hi = n.min(a.len() - 1);
                if lo > hi {
                    continue;
                }
                let mut acc = 0u64;
                let mut cnt = 0u64;
                for i in lo..=hi {
                    let x = a[i].0 as u64;
                    if x != 0 {
                        acc += x * b[n - i].0 as u64;
                        cnt += 1;
                        if cnt >= limit {
                            acc %= p;
                            cnt = 0;
                        }
                    }
                }
                *o = Fe((acc % p) as u32);
            }
            return out;
        }
        let k = d.k as usize;
        let da: Vec<u32> = a.iter().flat_map(|&x| self.digits(x)).collect();
        let db: Vec<u32> = b.iter().flat_map(|&x| self.digits(x)).collect();
        let nz_a: Vec<bool> = a.iter().map(|x| !x.is_zero()).collect();
        let mut out = vec![Fe(0); len];
        let mut acc = vec![0u64; 2 * k - 1];
        for (n, o) in out.iter_mut().enumerate() {
            let lo = n.saturating_sub(b.len() - 1);
            let hi = n.min(a.len() - 1);
            if lo > hi {
                continue;
            }
            acc.iter_mut().for_each(|v| *v = 0);
            for i in lo..=hi {
                if !nz_a[i] {
                    continue;
                }
                let xa = &da[i * k..(i + 1) * k];
                let xb = &db[(n - i) * k..(n - i + 1) * k];
                for (s, &x) in xa.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (t, &y) in xb.iter().enumerate() {
                        acc[s + t] += x as u64 * y as u64;
                    }
                }
            }
            *o = self.reduce_acc(&mut acc);
        }
        out
    }
}

fn is_primitive_root(g: u64, p: u64) -> bool {
    if p == 2 {
        return g % 2 == 1;
    }
    prime_factors(p - 1).iter().all(|&r| modpow(g, (p - 1) / r, p) != 1)
}

pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut a = 0;
    let mut t = q;
    while t.is_multiple_of(p) {
        t /= p;
        a += 1;
    }
    if t == 1 {
        Some((p as u32, a))
    } else {
        None
    }
}

fn slow_mul(d: &FieldData, a: Fe, b: Fe) -> Fe {
    let k = d.k as usize;
    let p = d.p;
    let dig = |x: Fe| {
        let mut v = x.0;
        (0..k)
            .map(|_| {
                let r = v % p;
                v /= p;
                r
            })
            .collect::<Vec<u32>>()
    };
    let da = dig(a);
    let db = dig(b);
    let r = fp_mulmod(&da, &db, &d.modulus, p);
    let mut out = 0u32;
    for (i, c) in r.iter().enumerate() {
        out += c * d.pow_p[i];
    }
    Fe(out)
}

fn slow_pow(d: &FieldData, a: Fe, mut e: u64) -> Fe {
    let mut r = Fe(1);
    let mut b = a;
    while e > 0 {
        if e & 1 == 1 {
            r = slow_mul(d, r, b);
        }
        b = slow_mul(d, b, b);
        e >>= 1;
    }
    r
}

fn find_generator(d: &FieldData) -> Fe {
    let n = d.size - 1;
    if n == 1 {
        return Fe(1);
    }
    let factors = prime_factors(n);
    let x = if d.k == 1 { Fe((d.p - d.modulus[0]) % d.p) } else { Fe(d.p) };
    let cands = std::iter::once(x).chain((1..d.size as u32).map(Fe));
    for c in cands {
        if c.0 == 0 {
            continue;
        }
        if factors.iter().all(|&r| slow_pow(d, c, n / r) != Fe(1)) {
            return c;
        }
    }
    Fe(1)
}

fn build_tables(d: &FieldData) -> Tables {
    let n = (d.size - 1) as usize;
    let mut log = vec![u32::MAX; d.size as usize];
    let mut exp = vec![0u32; 2 * n.max(1)];
    let mut cur = Fe(1);
    for i in 0..n {
        exp[i] = cur.0;
        exp[i + n] = cur.0;
        log[cur.0 as usize] = i as u32;
        cur = slow_mul(d, cur, d.gen);
    }
    if n == 1 {
        exp[1] = 1;
    }
    let add = if d.size <= ADD_TABLE_LIMIT && d.p != 2 && d.k > 1 {
        let s = d.size as usize;
        let mut t = vec![0u16; s * s];
        for x in 0..s {
            for y in 0..s {
                let mut a = x as u32;
                let mut b = y as u32;
                let mut r = 0u32;
                for i in 0..d.k as usize {
                    r += ((a % d.p + b % d.p) % d.p) * d.pow_p[i];
                    a /= d.p;
                    b /= d.p;
                }
                t[x * s + y] = r as u16;
            }
        }
        Some(t)
    } else {
        None
    };
    Tables { log, exp, add }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_sqrt_minus_one_frobenius() {
        let f = FieldDesc::default_for(3, 1, 2).unwrap();
        let minus_one = f.from_int(-1);
        let g = f.elements().find(|&x| f.mul(x, x) == minus_one).unwrap();
        assert_eq!(f.frobenius(g, 1), f.neg(g));
        assert_eq!(f.frobenius(f.one(), 5), f.one());
    }

    #[test]
    fn prime_field_frobenius_fixed() {
        let f = FieldDesc::for_q(5).unwrap();
        for c in f.elements() {
            assert_eq!(f.frobenius(c, -1), c);
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x+1)^2 over F_2
        assert!(matches!(FieldDesc::new(2, 1, 2, vec![1, 0, 1]), Err(Error::ReducibleModulus(2))));
    }

    #[test]
    fn field_axioms_small() {
        for (p, k) in [(2u32, 3u32), (3, 2), (5, 1), (2, 4), (7, 2)] {
            let f = FieldDesc::default_for(p, 1, k).unwrap();
            for x in f.elements() {
                assert_eq!(f.add(x, f.neg(x)), f.zero());
                if !x.is_zero() {
                    assert_eq!(f.mul(x, f.inv(x)), f.one());
                    assert_eq!(f.pow(x, f.size() - 1), f.one());
                }
            }
        }
    }

    #[test]
    fn large_field_poly_path_matches_generic() {
        // 3^9 > 2^12: polynomial arithmetic path
        let f = FieldDesc::default_for(3, 1, 9).unwrap();
        let g = f.generator();
        let h = f.pow(g, 1234);
        assert_eq!(f.mul(h, f.inv(h)), f.one());
        assert_eq!(f.dlog(h), Some(1234));
        assert_eq!(f.frobenius(f.frobenius(h, 4), -4), h);
    }

    #[test]
    fn convolution_matches_naive() {
        let f = FieldDesc::default_for(3, 1, 2).unwrap();
        let a: Vec<Fe> = (0..7).map(|i| Fe(i % 9)).collect();
        let b: Vec<Fe> = (0..5).map(|i| Fe((3 * i + 1) % 9)).collect();
        let c = f.convolve(&a, &b, 11);
        for n in 0..11 {
            let mut s = f.zero();
            for i in 0..a.len() {
                if n >= i && n - i < b.len() {
                    s = f.add(s, f.mul(a[i], b[n - i]));
                }
            }
            assert_eq!(c[n], s);
        }
    }

    #[test]
    fn base_subfield_of_f16() {
        let f = FieldDesc::default_for(2, 2, 2).unwrap();
        assert_eq!(f.q(), 4);
        let base = f.base_elements();
        assert_eq!(base.len(), 4);
        for x in base {
            assert!(f.in_base(x));
        }
    }
}
