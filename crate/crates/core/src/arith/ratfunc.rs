use super::field::FieldDesc;
use super::poly::{FPoly, Var};
use crate::error::{Error, Result};

/// Reduced fraction num/den with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    pub num: FPoly,
    pub den: FPoly,
}

impl RatFunc {
    pub fn new(num: FPoly, den: FPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.divrem(&g);
        let (mut d, _) = den.divrem(&g);
        let lc = d.lead();
        let inv = d.field().inv(lc);
        n = n.scale(inv);
        d = d.scale(inv);
        Ok(RatFunc { num: n, den: d })
    }
    pub fn from_poly(p: FPoly) -> Self {
        let one = FPoly::one(p.field(), p.var());
        RatFunc { num: p, den: one }
    }
    pub fn field(&self) -> &FieldDesc {
        self.num.field()
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_poly(&self) -> bool {
        self.den.degree() == Some(0)
    }
    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }
    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.den).sub(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }
    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }
    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        if o.is_zero() {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }
    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    pub fn powi(&self, e: i64) -> Result<RatFunc> {
        let base = if e < 0 { RatFunc::from_poly(FPoly::one(self.field(), self.num.var())).div(self)? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RatFunc { num: base.num.pow(k), den: base.den.pow(k) })
    }
    /// f^{(n)} = f^{q^n} for n ≥ 0: coefficients twisted, variable raised to q^n.
    pub fn twist(&self, n: u32) -> RatFunc {
        let qn = (self.field().q() as usize).pow(n);
        RatFunc {
            num: self.num.frobenius_coeffs(n as i64).inflate(qn),
            den: self.den.frobenius_coeffs(n as i64).inflate(qn),
        }
    }
    /// Degree valuation at ∞: deg den − deg num (∞ for zero).
    pub fn val_inf(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.den.deg_i() - self.num.deg_i())
        }
    }

    /// Parses expressions in the variable (`theta`, `θ`, `t`, `y`) with integers,
    /// `+ - * / ^` and parentheses.
    pub fn parse(field: &FieldDesc, s: &str, var: Var) -> Result<RatFunc> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks, pos: 0, field, var };
        let r = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(r)
    }

    pub fn render(&self) -> String {
        if self.is_poly() {
            self.num.render()
        } else {
            format!("({})/({})", self.num.render(), self.den.render())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Var,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut n = 0i64;
            while i < chars.len() && chars[i].is_ascii_digit() {
                n = n * 10 + chars[i].to_digit(10).unwrap() as i64;
                i += 1;
            }
            out.push(Tok::Num(n));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == 'θ' || c == 't' || c == 'y' || c == 'x' || c == 'T' {
            let rest: String = chars[i..].iter().collect();
            if rest.starts_with("theta") {
                i += 5;
            } else {
                i += 1;
            }
            out.push(Tok::Var);
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: &'a FieldDesc,
    var: Var,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }
    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c)) = self.peek().cloned() {
            if c == '+' || c == '-' {
                self.pos += 1;
                let rhs = self.term()?;
                acc = if c == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
            } else {
                break;
            }
        }
        Ok(acc)
    }
    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.factor()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    acc = acc.div(&self.factor()?)?;
                }
                Some(Tok::Num(_)) | Some(Tok::Var) | Some(Tok::Op('(')) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }
    fn factor(&mut self) -> Result<RatFunc> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let neg = if let Some(Tok::Op('-')) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    return base.powi(if neg { -n } else { n });
                }
                _ => return Err(Error::Parse("expected integer exponent".into())),
            }
        }
        Ok(base)
    }
    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::from_poly(FPoly::from_ints(self.field, &[n], self.var)))
            }
            Some(Tok::Var) => {
                self.pos += 1;
                Ok(RatFunc::from_poly(FPoly::var_poly(self.field, self.var)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}
