use crate::arith::{FPoly, Fe, FieldDesc, Var};
use crate::cmtypes::{CMField, ModelKind};
use crate::error::{Error, Result};
use crate::infinity::{InfElem, EXACT};

/// Coefficient ring R = F_q[w] with θ = c·w^E, embedded in C_∞ by w ↦ `w_inf`.
///
/// For E = 1 the generator is θ itself and polynomials use the variable θ.
#[derive(Clone, Debug)]
pub struct CoeffRing {
    pub field: FieldDesc,
    pub exponent: u32,
    pub c: Fe,
    pub w_inf: InfElem,
    /// ν_ξ = ζ_ξ·w for every point of J_K (monogenic models).
    pub zetas: Vec<Fe>,
}

impl CoeffRing {
    pub fn var(&self) -> Var {
        if self.exponent == 1 && self.c == self.field.one() {
            Var::Theta
        } else {
            Var::W
        }
    }

    /// Coefficient ring for a model whose points are F_q-multiples of one root of
    /// y^r = −c₁θ; any other shape is rejected.
    pub fn for_field(cm: &CMField) -> Result<Self> {
        let model = &cm.model;
        let f = model.field()?;
        if model.kind == ModelKind::ConstExt {
            return Ok(CoeffRing {
                field: f.clone(),
                exponent: 1,
                c: f.one(),
                w_inf: InfElem::theta(&f, 1, EXACT),
                zetas: vec![],
            });
        }
        let r = model.degree();
        let binomial = model.m[0].len() == 2
            && model.m[0][0] == 0
            && model.m[1..r].iter().all(|c| c.iter().all(|&x| x == 0));
        if !binomial {
            return Err(Error::UnsupportedCoefficients(format!(
                "{}: J_K coordinates do not lie in a Kummer ring F_q[w], w^E = uθ",
                model.name
            )));
        }
        let c1 = f.from_int(model.m[0][1]);
        let c = f.neg(f.inv(c1));
        let nu0 = &cm.points[0].nu;
        if nu0.terms().count() != 1 {
            return Err(Error::UnsupportedCoefficients("root of m(θ, y) is not a monomial".into()));
        }
        let w_inf = nu0.with_prec_exact(EXACT);
        let big = w_inf.field().clone();
        let emb = f.embedding_into(&big)?;
        let lead0 = w_inf.lead_coeff();
        let mut zetas = Vec::with_capacity(cm.points.len());
        for p in &cm.points {
            let ratio = big.div(p.nu.lead_coeff(), lead0);
            let z = f
                .elements()
                .find(|&z| emb.apply(z) == ratio)
                .ok_or_else(|| Error::UnsupportedCoefficients("conjugate roots differ by a non-constant".into()))?;
            if p.nu.order() != w_inf.order() || !p.nu.agrees_with(&w_inf.scale(ratio)) {
                return Err(Error::UnsupportedCoefficients("J_K is not a set of F_q-multiples of w".into()));
            }
            zetas.push(z);
        }
        Ok(CoeffRing { field: f, exponent: r as u32, c, w_inf, zetas })
    }

    pub fn zero(&self) -> FPoly {
        FPoly::zero(&self.field, self.var())
    }

    pub fn one(&self) -> FPoly {
        FPoly::one(&self.field, self.var())
    }

    pub fn w(&self) -> FPoly {
        FPoly::monomial(&self.field, self.field.one(), 1, self.var())
    }

    pub fn constant(&self, c: Fe) -> FPoly {
        FPoly::constant(&self.field, c, self.var())
    }

    /// θ = c·w^E as an element of R.
    pub fn theta(&self) -> FPoly {
        FPoly::monomial(&self.field, self.c, self.exponent as usize, self.var())
    }

    /// Image of an element of R in C_∞.
    pub fn embed(&self, a: &FPoly) -> Result<InfElem> {
        let big = self.w_inf.field();
        let emb = self.field.embedding_into(big)?;
        let e = self.w_inf.e();
        let mut acc = InfElem::zero(big, e, EXACT);
        for &c in a.coeffs().iter().rev() {
            acc = acc.mul(&self.w_inf).add(&InfElem::constant(big, emb.apply(c), e, EXACT));
        }
        Ok(acc)
    }

    pub fn describe(&self) -> String {
        match self.var() {
            Var::Theta => format!("F_{}[θ]", self.field.q()),
            _ => format!(
                "F_{}[w], θ = {}·w^{}",
                self.field.q(),
                crate::arith::render_fe(&self.field, self.c),
                self.exponent
            ),
        }
    }
}

/// Polynomial in t with coefficients in R (lowest degree first, no trailing zeros).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RPoly {
    field: FieldDesc,
    var: Var,
    c: Vec<FPoly>,
}

impl RPoly {
    pub fn new(ring: &CoeffRing, c: Vec<FPoly>) -> Self {
        RPoly { field: ring.field.clone(), var: ring.var(), c }.norm()
    }

    fn like(&self, c: Vec<FPoly>) -> Self {
        RPoly { field: self.field.clone(), var: self.var, c }.norm()
    }

    fn norm(mut self) -> Self {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
        self
    }

    pub fn zero(ring: &CoeffRing) -> Self {
        RPoly::new(ring, vec![])
    }

    pub fn constant(ring: &CoeffRing, a: FPoly) -> Self {
        RPoly::new(ring, vec![a])
    }

    /// t − a.
    pub fn t_minus(ring: &CoeffRing, a: &FPoly) -> Self {
        RPoly::new(ring, vec![a.neg(), ring.one()])
    }

    /// A polynomial in t over F_q, viewed over R.
    pub fn from_fq(ring: &CoeffRing, p: &FPoly) -> Self {
        RPoly::new(ring, p.coeffs().iter().map(|&c| ring.constant(c)).collect())
    }

    fn zero_coeff(&self) -> FPoly {
        FPoly::zero(&self.field, self.var)
    }

    pub fn coeffs(&self) -> &[FPoly] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> FPoly {
        self.c.get(i).cloned().unwrap_or_else(|| self.zero_coeff())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg_t(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn add(&self, o: &RPoly) -> RPoly {
        let n = self.c.len().max(o.c.len());
        self.like((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &RPoly) -> RPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RPoly {
        self.like(self.c.iter().map(|x| x.neg()).collect())
    }

    pub fn scale(&self, a: &FPoly) -> RPoly {
        self.like(self.c.iter().map(|x| x.mul(a)).collect())
    }

    pub fn mul(&self, o: &RPoly) -> RPoly {
        if self.is_zero() || o.is_zero() {
            return self.like(vec![]);
        }
        let mut out = vec![self.zero_coeff(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        self.like(out)
    }

    pub fn pow(&self, n: u32) -> RPoly {
        let mut acc = self.like(vec![FPoly::one(&self.field, self.var)]);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, a: &FPoly) -> FPoly {
        let mut acc = self.zero_coeff();
        for x in self.c.iter().rev() {
            acc = acc.mul(a).add(x);
        }
        acc
    }

    /// Division by t − a: (quotient, remainder).
    pub fn div_linear(&self, a: &FPoly) -> (RPoly, FPoly) {
        if self.is_zero() {
            return (self.clone(), self.zero_coeff());
        }
        let n = self.c.len();
        let mut q = vec![self.zero_coeff(); n - 1];
        let mut acc = self.zero_coeff();
        for i in (0..n).rev() {
            acc = acc.mul(a).add(&self.c[i]);
            if i > 0 {
                q[i - 1] = acc.clone();
            }
        }
        (self.like(q), acc)
    }

    /// Largest k with (t − a)^k dividing self; None for zero.
    pub fn ord_at(&self, a: &FPoly) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_linear(a);
            if !r.is_zero() {
                return Some(k);
            }
            k += 1;
            cur = q;
        }
    }

    /// Whether d divides self in R[t]; d must have an F_q^× leading coefficient.
    pub fn divisible_by(&self, d: &RPoly) -> Result<bool> {
        let dd = d.deg_t().ok_or_else(|| Error::InvalidArgument("division by zero".into()))?;
        let lead = &d.c[dd];
        if lead.degree() != Some(0) {
            return Err(Error::InvalidArgument("divisor is not monic up to a constant".into()));
        }
        let inv = self.field.inv(lead.coeff(0));
        let mut r = self.clone();
        while let Some(rd) = r.deg_t() {
            if rd < dd {
                break;
            }
            let f = r.c[rd].scale(inv);
            let mut shifted = vec![self.zero_coeff(); rd - dd];
            shifted.extend(d.c.iter().map(|x| x.mul(&f)));
            r = r.sub(&self.like(shifted));
        }
        Ok(r.is_zero())
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, x) in self.c.iter().enumerate().rev() {
            if x.is_zero() {
                continue;
            }
            let cs = x.render();
            let coef = if x.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 { format!("({cs})") } else { cs };
            parts.push(match i {
                0 => coef,
                1 => format!("{coef}*t"),
                _ => format!("{coef}*t^{i}"),
            });
        }
        parts.join(" + ")
    }
}

/// Matrix over R[t].
pub type RMat = Vec<Vec<RPoly>>;

/// Determinant by cofactor expansion.
pub fn rdet(m: &RMat, ring: &CoeffRing) -> RPoly {
    let n = m.len();
    if n == 0 {
        return RPoly::constant(ring, ring.one());
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = RPoly::zero(ring);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: RMat = m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = m[0][j].mul(&rdet(&minor, ring));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// adj(m) with m·adj(m) = det(m)·I.
pub fn radj(m: &RMat, ring: &CoeffRing) -> RMat {
    let n = m.len();
    if n == 1 {
        return vec![vec![RPoly::constant(ring, ring.one())]];
    }
    let mut out = vec![vec![RPoly::zero(ring); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: RMat = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != j)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, x)| x.clone()).collect())
                .collect();
            let d = rdet(&minor, ring);
            out[i][j] = if (i + j) % 2 == 0 { d } else { d.neg() };
        }
    }
    out
}

/// All k-subsets of 0..n in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}
