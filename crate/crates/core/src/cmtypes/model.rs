use serde::{Deserialize, Serialize};

use crate::arith::{FPoly, FieldDesc, Var};
use crate::error::{Error, Result};
use crate::infinity::InfElem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// K = F_q(t).
    Rational,
    /// O_K = F_q[t][y]/m(t, y), m monic in y.
    Monogenic,
    /// K = F_{q^ℓ}(t).
    ConstExt,
}

/// Generators of the (abelian) Galois action supplied with a model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Automorphism {
    /// y ↦ g^dlog · y, g the recorded generator of F_q^×.
    Scale { dlog: u64 },
    /// y ↦ 1/y.
    Invert,
    /// Constant Frobenius on F_{q^ℓ}.
    ConstFrobenius,
}

/// num(y)/den(y) with prime-field integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YRational {
    pub num: Vec<i64>,
    pub den: Vec<i64>,
}

impl YRational {
    pub fn poly(num: Vec<i64>) -> Self {
        YRational { num, den: vec![1] }
    }

    pub fn num_poly(&self, f: &FieldDesc) -> FPoly {
        FPoly::from_ints(f, &self.num, Var::Y)
    }

    pub fn den_poly(&self, f: &FieldDesc) -> FPoly {
        FPoly::from_ints(f, &self.den, Var::Y)
    }

    pub fn eval(&self, y: &InfElem) -> Result<InfElem> {
        let n = eval_ints(&self.num, y);
        let d = eval_ints(&self.den, y);
        n.div(&d)
    }
}

fn eval_ints(c: &[i64], y: &InfElem) -> InfElem {
    let f = y.field();
    let mut acc = InfElem::zero(f, y.e(), crate::infinity::EXACT);
    for &a in c.iter().rev() {
        acc = acc.mul(y).add(&InfElem::from_int(f, a, y.e(), crate::infinity::EXACT));
    }
    acc
}

/// Maximal totally real subfield K⁺ = F_q(t)(s), s a rational function of y.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KPlus {
    pub generator: YRational,
    pub degree: usize,
}

/// A CM field presented explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CMFieldModel {
    pub name: String,
    pub kind: ModelKind,
    pub q: u64,
    /// m(t, y) = Σ_k m[k](t) y^k (t-coefficients as prime-field integers).
    #[serde(default)]
    pub m: Vec<Vec<i64>>,
    #[serde(default = "default_ell")]
    pub ell: u32,
    /// Genus-zero parametrization t = P(y)/Q(y).
    #[serde(default)]
    pub param: Option<YRational>,
    /// None means K⁺ = F_q(t).
    #[serde(default)]
    pub kplus: Option<KPlus>,
    #[serde(default)]
    pub automorphisms: Vec<Automorphism>,
    #[serde(default)]
    pub note: String,
}

fn default_ell() -> u32 {
    1
}

impl CMFieldModel {
    /// K = F_q(t), presented by y = t.
    pub fn rational(q: u64) -> Self {
        CMFieldModel {
            name: "carlitz".into(),
            kind: ModelKind::Rational,
            q,
            m: vec![vec![0, -1], vec![1]],
            ell: 1,
            param: Some(YRational::poly(vec![0, 1])),
            kplus: None,
            automorphisms: vec![],
            note: "K = F_q(t)".into(),
        }
    }

    /// y^{q−1} = −t, the Carlitz t-th cyclotomic field.
    pub fn kummer_t(q: u64) -> Result<Self> {
        if q < 3 {
            return Err(Error::InvalidArgument("kummer-t needs q ≥ 3".into()));
        }
        let r = (q - 1) as usize;
        let mut m = vec![vec![]; r + 1];
        m[0] = vec![0, 1];
        m[r] = vec![1];
        let mut p = vec![0; r + 1];
        p[r] = -1;
        Ok(CMFieldModel {
            name: format!("kummer-t:{q}"),
            kind: ModelKind::Monogenic,
            q,
            m,
            ell: 1,
            param: Some(YRational::poly(p)),
            kplus: None,
            automorphisms: vec![Automorphism::Scale { dlog: 1 }],
            note: "y^(q-1) = -t".into(),
        })
    }

    /// K = F_{q^ℓ}(t).
    pub fn const_ext(q: u64, ell: u32) -> Result<Self> {
        if ell < 2 {
            return Err(Error::InvalidArgument("const-ext needs ℓ ≥ 2".into()));
        }
        Ok(CMFieldModel {
            name: format!("const-ext:{ell}"),
            kind: ModelKind::ConstExt,
            q,
            m: vec![],
            ell,
            param: None,
            kplus: None,
            automorphisms: vec![Automorphism::ConstFrobenius],
            note: "constant field extension".into(),
        })
    }

    /// t = y² + y^{−2}, K⁺ = F_q(t)(y²): d = 2, [K:K⁺] = 2.
    pub fn quartic_d2(q: u64) -> Result<Self> {
        if q.is_multiple_of(2) {
            return Err(Error::InvalidArgument("quartic-d2 needs odd q".into()));
        }
        Ok(CMFieldModel {
            name: format!("quartic-d2:{q}"),
            kind: ModelKind::Monogenic,
            q,
            m: vec![vec![1], vec![], vec![0, -1], vec![], vec![1]],
            ell: 1,
            param: Some(YRational { num: vec![1, 0, 0, 0, 1], den: vec![0, 0, 1] }),
            kplus: Some(KPlus { generator: YRational::poly(vec![0, 0, 1]), degree: 2 }),
            automorphisms: vec![Automorphism::Scale { dlog: (q - 1) / 2 }, Automorphism::Invert],
            note: "y^4 - t y^2 + 1 = 0".into(),
        })
    }

    /// F_2(t)(y), y³ = t²(t+1): the integral normalization of y³ = (t+1)/t, not CM.
    pub fn cubic_f2() -> Self {
        CMFieldModel {
            name: "cubic-f2".into(),
            kind: ModelKind::Monogenic,
            q: 2,
            m: vec![vec![0, 0, 1, 1], vec![], vec![], vec![1]],
            ell: 1,
            param: None,
            kplus: None,
            automorphisms: vec![],
            note: "y^3 = t^2 (t+1); infinity splits into two places".into(),
        }
    }

    /// Model for a fixture name: carlitz, carlitz-tensor:n, kummer-t:q, const-ext:ℓ,
    /// quartic-d2:q, cubic-f2. `q` is used where the name does not fix it.
    pub fn by_name(name: &str, q: u64) -> Result<Self> {
        let (head, arg) = match name.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        let num = |a: Option<&str>| -> Result<u64> {
            a.ok_or_else(|| Error::InvalidArgument(format!("{name}: missing parameter")))?
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("{name}: {e}")))
        };
        match head {
            "carlitz" | "carlitz-tensor" => Ok(CMFieldModel::rational(q)),
            "kummer-t" => CMFieldModel::kummer_t(num(arg)?),
            "const-ext" => CMFieldModel::const_ext(q, num(arg)? as u32),
            "quartic-d2" => CMFieldModel::quartic_d2(num(arg)?),
            "cubic-f2" => Ok(CMFieldModel::cubic_f2()),
            _ => Err(Error::InvalidArgument(format!("unknown model {name}"))),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: CMFieldModel = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        m.check_shape()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        CMFieldModel::from_json(&s)
    }

    /// Structural sanity of the presentation (monic m, consistent degrees).
    pub fn check_shape(&self) -> Result<()> {
        FieldDesc::for_q(self.q)?;
        match self.kind {
            ModelKind::ConstExt => {
                if self.ell < 2 {
                    return Err(Error::ModelValidation("const-ext needs ℓ ≥ 2".into()));
                }
            }
            ModelKind::Rational | ModelKind::Monogenic => {
                let lead = self.m.last().ok_or_else(|| Error::ModelValidation("empty m(t,y)".into()))?;
                if lead.as_slice() != [1] {
                    return Err(Error::ModelValidation("m(t,y) must be monic in y".into()));
                }
                if self.m.len() < 2 {
                    return Err(Error::ModelValidation("m(t,y) must have positive y-degree".into()));
                }
                if self.kind == ModelKind::Rational && self.m.len() != 2 {
                    return Err(Error::ModelValidation("rational model has y-degree 1".into()));
                }
            }
        }
        if let Some(kp) = &self.kplus {
            if kp.degree == 0 || !self.degree().is_multiple_of(kp.degree) {
                return Err(Error::ModelValidation("[K⁺:F_q(t)] must divide [K:F_q(t)]".into()));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Result<FieldDesc> {
        FieldDesc::for_q(self.q)
    }

    /// [K : F_q(t)].
    pub fn degree(&self) -> usize {
        match self.kind {
            ModelKind::ConstExt => self.ell as usize,
            _ => self.m.len() - 1,
        }
    }

    /// d = [K⁺ : F_q(t)].
    pub fn d(&self) -> usize {
        self.kplus.as_ref().map(|k| k.degree).unwrap_or(1)
    }

    /// [K : K⁺].
    pub fn cm_degree(&self) -> usize {
        self.degree() / self.d()
    }

    /// The t-coefficient polynomials of m(t, y).
    pub fn m_coeffs(&self, f: &FieldDesc) -> Vec<FPoly> {
        self.m.iter().map(|c| FPoly::from_ints(f, c, Var::T)).collect()
    }

    /// m(x, y) as a polynomial in y with coefficients in C_∞, x = θ (or t at ∞).
    pub fn m_at(&self, f: &FieldDesc, prec: i64) -> Result<Vec<InfElem>> {
        self.m_coeffs(f).iter().map(|c| InfElem::from_poly(c, f, 1, prec)).collect()
    }
}
