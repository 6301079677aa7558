use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::{Fe, FieldDesc};

/// Name of the distinguished variable of a polynomial.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    Theta,
    T,
    Y,
    X,
    S,
    /// Generator of a Kummer coefficient ring.
    W,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Var::Theta => "θ",
            Var::T => "t",
            Var::Y => "y",
            Var::X => "X",
            Var::S => "s",
            Var::W => "w",
        };
        f.write_str(s)
    }
}

/// Univariate polynomial over a finite field, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct FPoly {
    field: FieldDesc,
    coeffs: Vec<Fe>,
    var: Var,
}

impl fmt::Debug for FPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FPoly[{}]({:?})", self.var, self.coeffs.iter().map(|c| c.0).collect::<Vec<_>>())
    }
}

impl FPoly {
    pub fn new(field: &FieldDesc, mut coeffs: Vec<Fe>, var: Var) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FPoly { field: field.clone(), coeffs, var }
    }
    pub fn from_ints(field: &FieldDesc, ints: &[i64], var: Var) -> Self {
        FPoly::new(field, ints.iter().map(|&i| field.from_int(i)).collect(), var)
    }
    pub fn zero(field: &FieldDesc, var: Var) -> Self {
        FPoly { field: field.clone(), coeffs: vec![], var }
    }
    pub fn constant(field: &FieldDesc, c: Fe, var: Var) -> Self {
        FPoly::new(field, vec![c], var)
    }
    pub fn one(field: &FieldDesc, var: Var) -> Self {
        FPoly::constant(field, field.one(), var)
    }
    pub fn monomial(field: &FieldDesc, c: Fe, n: usize, var: Var) -> Self {
        let mut v = vec![field.zero(); n + 1];
        v[n] = c;
        FPoly::new(field, v, var)
    }
    pub fn var_poly(field: &FieldDesc, var: Var) -> Self {
        FPoly::monomial(field, field.one(), 1, var)
    }
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }
    pub fn var(&self) -> Var {
        self.var
    }
    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }
    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }
    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn deg_i(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }
    pub fn lead(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn add(&self, o: &FPoly) -> FPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect();
        FPoly::new(f, v, self.var)
    }
    pub fn sub(&self, o: &FPoly) -> FPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect();
        FPoly::new(f, v, self.var)
    }
    pub fn neg(&self) -> FPoly {
        let f = &self.field;
        FPoly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect(), self.var)
    }
    pub fn scale(&self, c: Fe) -> FPoly {
        let f = &self.field;
        FPoly::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect(), self.var)
    }
    pub fn shift(&self, n: usize) -> FPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Fe::ZERO; n];
        v.extend_from_slice(&self.coeffs);
        FPoly::new(&self.field, v, self.var)
    }
    pub fn mul(&self, o: &FPoly) -> FPoly {
        if self.is_zero() || o.is_zero() {
            return FPoly::zero(&self.field, self.var);
        }
        let len = self.coeffs.len() + o.coeffs.len() - 1;
        let v = self.field.convolve(&self.coeffs, &o.coeffs, len);
        FPoly::new(&self.field, v, self.var)
    }
    pub fn pow(&self, mut e: u64) -> FPoly {
        let mut r = FPoly::one(&self.field, self.var);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }
    pub fn monic(&self) -> FPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lead()))
    }
    pub fn divrem(&self, d: &FPoly) -> (FPoly, FPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = &self.field;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (FPoly::zero(f, self.var), self.clone());
        }
        let inv = f.inv(d.lead());
        let mut r = self.coeffs.clone();
        let mut q = vec![Fe::ZERO; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dd], inv);
            q[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(c, dj));
            }
        }
        r.truncate(dd);
        (FPoly::new(f, q, self.var), FPoly::new(f, r, self.var))
    }
    pub fn rem(&self, d: &FPoly) -> FPoly {
        self.divrem(d).1
    }
    /// Exact quotient, or None when d does not divide self.
    pub fn exact_div(&self, d: &FPoly) -> Option<FPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }
    pub fn gcd(&self, o: &FPoly) -> FPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
    pub fn derivative(&self) -> FPoly {
        let f = &self.field;
        let v = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, f.from_int(i as i64))).collect();
        FPoly::new(f, v, self.var)
    }
    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }
    pub fn mulmod(&self, o: &FPoly, m: &FPoly) -> FPoly {
        self.mul(o).rem(m)
    }
    pub fn powmod(&self, mut e: u128, m: &FPoly) -> FPoly {
        let mut r = FPoly::one(&self.field, self.var).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mulmod(&b, m);
            }
            b = b.mulmod(&b, m);
            e >>= 1;
        }
        r
    }
    /// Coefficientwise q^n-Frobenius (twist on coefficients).
    pub fn frobenius_coeffs(&self, n: i64) -> FPoly {
        let f = &self.field;
        FPoly::new(f, self.coeffs.iter().map(|&c| f.frobenius(c, n)).collect(), self.var)
    }
    /// Substitute var ↦ var^k.
    pub fn inflate(&self, k: usize) -> FPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Fe::ZERO; (self.coeffs.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * k] = c;
        }
        FPoly::new(&self.field, v, self.var)
    }
    /// Composition self(g).
    pub fn compose(&self, g: &FPoly) -> FPoly {
        let mut acc = FPoly::zero(&self.field, g.var);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&FPoly::constant(&self.field, c, g.var));
        }
        acc
    }
    /// Map coefficients into another field along an embedding function.
    pub fn map_coeffs(&self, field: &FieldDesc, f: impl Fn(Fe) -> Fe) -> FPoly {
        FPoly::new(field, self.coeffs.iter().map(|&c| f(c)).collect(), self.var)
    }
    pub fn is_squarefree(&self) -> bool {
        let d = self.derivative();
        if d.is_zero() {
            return self.degree().unwrap_or(0) == 0;
        }
        self.gcd(&d).degree() == Some(0)
    }

    /// Human-readable rendering with integer-digit coefficients.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = render_fe(&self.field, c);
            let term = match i {
                0 => cs,
                1 if c == Fe::ONE => format!("{}", self.var),
                1 => format!("{}*{}", cs, self.var),
                _ if c == Fe::ONE => format!("{}^{}", self.var, i),
                _ => format!("{}*{}^{}", cs, self.var, i),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

/// Integer rendering for prime-field elements, bracketed digit vector otherwise.
pub fn render_fe(f: &FieldDesc, c: Fe) -> String {
    if f.k() == 1 {
        format!("{}", c.0)
    } else {
        format!("{:?}", f.digits(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_roundtrip() {
        let f = FieldDesc::for_q(7).unwrap();
        let a = FPoly::from_ints(&f, &[3, 1, 4, 1, 5, 9, 2, 6], Var::T);
        let b = FPoly::from_ints(&f, &[2, 7, 1, 8], Var::T);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 3);
    }

    #[test]
    fn gcd_of_products() {
        let f = FieldDesc::for_q(5).unwrap();
        let x = FPoly::var_poly(&f, Var::Y);
        let l1 = x.sub(&FPoly::constant(&f, f.from_int(1), Var::Y));
        let l2 = x.add(&FPoly::constant(&f, f.from_int(2), Var::Y));
        let l3 = x.add(&FPoly::constant(&f, f.from_int(3), Var::Y));
        let a = l1.mul(&l2);
        let b = l1.mul(&l3);
        assert_eq!(a.gcd(&b), l1);
    }
}
