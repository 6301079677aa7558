//! Named fixtures pairing a CM field, a motive and its t-module.

use std::fmt;
use std::str::FromStr;

use crate::cmtypes::{CMDivisor, CMField, CMFieldModel};
use crate::error::{Error, Result};
use crate::infinity::{InfElem, EXACT};
use crate::shtuka::{motive_for, DualMotive};
use crate::tmodule::{build_psi, Lattice, PsiOutput, PsiRecipe, TModule};
use crate::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureName {
    Carlitz,
    CarlitzTensor(u32),
    KummerT(u64),
    ConstExt(u32),
}

impl FromStr for FixtureName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown fixture '{s}' (carlitz, carlitz-tensor:n, kummer-t:q, const-ext:l)"));
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        match s.split_once(':') {
            None if s == "carlitz" => Ok(FixtureName::Carlitz),
            Some(("carlitz-tensor", n)) if num(n)? >= 1 => Ok(FixtureName::CarlitzTensor(num(n)? as u32)),
            Some(("kummer-t", q)) => Ok(FixtureName::KummerT(num(q)?)),
            Some(("const-ext", l)) if num(l)? >= 2 => Ok(FixtureName::ConstExt(num(l)? as u32)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FixtureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureName::Carlitz => write!(f, "carlitz"),
            FixtureName::CarlitzTensor(n) => write!(f, "carlitz-tensor:{n}"),
            FixtureName::KummerT(q) => write!(f, "kummer-t:{q}"),
            FixtureName::ConstExt(l) => write!(f, "const-ext:{l}"),
        }
    }
}

pub struct Fixture {
    pub name: FixtureName,
    pub q: u64,
    pub prec: i64,
    pub cm: CMField,
    pub xi: CMDivisor,
    pub motive: DualMotive,
    /// The t-module paired with the motive.
    pub tmodule: TModule,
    /// Module whose AGFs produce Ψ, with the recipe; None when no recipe is shipped.
    pub psi_source: Option<(TModule, PsiRecipe)>,
}

impl Fixture {
    /// Builds a fixture. `q` applies to carlitz, carlitz-tensor and const-ext; kummer-t carries its own.
    pub fn load(name: &str, q: u64, prec: i64) -> Result<Fixture> {
        let name: FixtureName = name.parse()?;
        let mprec = prec.min(60);
        let (q, model, xi) = match name {
            FixtureName::Carlitz => (q, CMFieldModel::rational(q), CMDivisor::single("xi_theta", 1)),
            FixtureName::CarlitzTensor(n) => (q, CMFieldModel::rational(q), CMDivisor::single("xi_theta", n as i64)),
            FixtureName::KummerT(q) => (q, CMFieldModel::kummer_t(q)?, CMDivisor::single("xi1", 1)),
            FixtureName::ConstExt(l) => (q, CMFieldModel::const_ext(q, l)?, CMDivisor::single("xi0", 1)),
        };
        let cm = CMField::new(model, mprec)?;
        let motive = motive_for(&cm, &xi)?;
        let (tmodule, psi_source) = match name {
            FixtureName::Carlitz => {
                let c = TModule::carlitz(q, prec)?;
                (TModule::carlitz(q, prec)?, Some((c, PsiRecipe::CarlitzPower(1))))
            }
            FixtureName::CarlitzTensor(n) => {
                let c = TModule::carlitz(q, prec)?;
                (TModule::carlitz_tensor(q, n as usize, prec)?, Some((c, PsiRecipe::CarlitzPower(n))))
            }
            FixtureName::KummerT(q) => (TModule::kummer(q, prec)?, Some((TModule::kummer(q, prec)?, PsiRecipe::Kummer))),
            FixtureName::ConstExt(l) => (const_ext_module(q, l, prec)?, None),
        };
        Ok(Fixture { name, q, prec, cm, xi, motive, tmodule, psi_source })
    }

    /// Period lattice of the paired t-module (Drinfeld modules only) or of the Ψ source.
    pub fn lattice(&self) -> Result<Lattice> {
        if self.tmodule.d() == 1 {
            return self.tmodule.period_lattice();
        }
        match &self.psi_source {
            Some((m, _)) => m.period_lattice(),
            None => Err(Error::InvalidArgument("no lattice for this fixture".into())),
        }
    }

    /// Ψ from AGFs of the lattice generator, checked against the motive's Φ.
    pub fn psi(&self, t: usize, threshold: Rat) -> Result<PsiOutput> {
        let (rho, recipe) = self
            .psi_source
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("no Ψ recipe for {}", self.name)))?;
        let lattice = rho.period_lattice()?;
        build_psi(rho, &lattice, &self.motive.phi_tate(t)?, *recipe, t, threshold)
    }
}

/// ρ_t = θ + τ^ℓ, a rank-ℓ Drinfeld module with CM by F_{q^ℓ}[t].
fn const_ext_module(q: u64, l: u32, prec: i64) -> Result<TModule> {
    let f = crate::arith::FieldDesc::for_q(q)?;
    let mut rho = vec![vec![vec![InfElem::theta(&f, 1, EXACT)]]];
    for _ in 1..l {
        rho.push(vec![vec![InfElem::zero(&f, 1, EXACT)]]);
    }
    rho.push(vec![vec![InfElem::one(&f, 1, EXACT)]]);
    TModule::new(&format!("const-ext:{l}"), l as usize, rho, None, prec)
}
