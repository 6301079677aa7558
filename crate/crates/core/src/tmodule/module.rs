use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::linalg::{mat_add, mat_frobenius, mat_identity, mat_is_zero, mat_mul, mat_sub, mat_vec, mat_zero, Mat};
use crate::infinity::EXACT;
use crate::arith::FieldDesc;
use crate::error::{Error, Result};
use crate::infinity::{InfElem, InfElemJson};
use crate::Rat;

/// Extra precision (valuation units) carried by the coefficients of ρ.
pub const WORK_MARGIN: i64 = 24;

/// A twisted polynomial Σ A_k τ^k with d×d coefficient matrices.
pub type TwPoly = Vec<Mat>;

/// A second F_q-linear endomorphism commuting with ρ_t (e.g. ρ_y).
#[derive(Clone, Debug)]
pub struct CmAction {
    pub name: String,
    pub rho: TwPoly,
}

/// Abelian t-module of dimension d: ρ_t = Σ A_k τ^k with ∂ρ_t = A_0.
pub struct TModule {
    name: String,
    d: usize,
    rank: usize,
    rho_t: TwPoly,
    cm: Option<CmAction>,
    n: i64,
    exp_cache: Mutex<Vec<Mat>>,
    log_cache: Mutex<Vec<Mat>>,
}

impl Clone for TModule {
    fn clone(&self) -> Self {
        TModule {
            name: self.name.clone(),
            d: self.d,
            rank: self.rank,
            rho_t: self.rho_t.clone(),
            cm: self.cm.clone(),
            n: self.n,
            exp_cache: Mutex::new(self.exp_cache.lock().unwrap().clone()),
            log_cache: Mutex::new(self.log_cache.lock().unwrap().clone()),
        }
    }
}

impl std::fmt::Debug for TModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TModule({}, d={}, r={}, N={})", self.name, self.d, self.rank, self.n)
    }
}

/// (Σ a_i τ^i)(Σ b_j τ^j) = Σ a_i b_j^{(i)} τ^{i+j}.
pub fn tw_mul(a: &TwPoly, b: &TwPoly) -> Result<TwPoly> {
    let d = a[0].len();
    let mut out = vec![mat_zero(&a[0][0][0], d, d); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let t = mat_mul(ai, &mat_frobenius(bj, i as i64)?);
            out[i + j] = mat_add(&out[i + j], &t);
        }
    }
    Ok(out)
}

fn tw_sub(a: &TwPoly, b: &TwPoly) -> TwPoly {
    let d = a[0].len();
    let z = mat_zero(&a[0][0][0], d, d);
    (0..a.len().max(b.len())).map(|i| mat_sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect()
}

/// Exact entries stay exact; others are cut to the working precision.
fn exact_or_truncated(x: &InfElem, wp: i64) -> InfElem {
    if x.prec() >= EXACT / 2 {
        x.clone()
    } else {
        x.truncate(wp)
    }
}

fn scalar(x: InfElem) -> Mat {
    vec![vec![x]]
}

fn min_val(m: &Mat) -> Rat {
    m.iter().flat_map(|r| r.iter().map(|x| x.val_or_prec())).min().unwrap()
}

fn min_val_vec(v: &[InfElem]) -> Rat {
    v.iter().map(|x| x.val_or_prec()).min().unwrap()
}

impl TModule {
    /// Builds a t-module after unifying all coefficients and checking the invariants.
    pub fn new(name: &str, rank: usize, rho_t: TwPoly, cm: Option<CmAction>, n: i64) -> Result<Self> {
        if rho_t.is_empty() || rho_t[0].is_empty() {
            return Err(Error::InvalidArgument("empty ρ_t".into()));
        }
        let d = rho_t[0].len();
        let mut base = rho_t[0][0][0].clone();
        let all = rho_t.iter().chain(cm.iter().flat_map(|c| c.rho.iter()));
        for m in all.clone() {
            if m.len() != d || m.iter().any(|r| r.len() != d) {
                return Err(Error::InvalidArgument("coefficient matrices must be d×d".into()));
            }
            for x in m.iter().flatten() {
                base = InfElem::unify(&base, x).0;
            }
        }
        let wp = (n + WORK_MARGIN) * base.e() as i64;
        let fix = |p: &TwPoly| -> TwPoly {
            p.iter()
                .map(|m| m.iter().map(|r| r.iter().map(|x| exact_or_truncated(&InfElem::unify(x, &base).0, wp)).collect()).collect())
                .collect()
        };
        let rho_t = fix(&rho_t);
        let cm = cm.map(|c| CmAction { name: c.name, rho: fix(&c.rho) });
        let m = TModule {
            name: name.to_string(),
            d,
            rank,
            rho_t,
            cm,
            n,
            exp_cache: Mutex::new(vec![]),
            log_cache: Mutex::new(vec![]),
        };
        m.check_invariants()?;
        Ok(m)
    }

    fn check_invariants(&self) -> Result<()> {
        let a0 = &self.rho_t[0];
        let like = &a0[0][0];
        let theta = InfElem::theta(like.field(), like.e(), crate::infinity::EXACT);
        let mut nmat = a0.clone();
        for (i, row) in nmat.iter_mut().enumerate() {
            row[i] = row[i].sub(&theta);
        }
        let mut pw = nmat.clone();
        for _ in 1..self.d {
            pw = mat_mul(&pw, &nmat);
        }
        if !mat_is_zero(&pw) {
            return Err(Error::ModelValidation("∂ρ_t − θ is not nilpotent".into()));
        }
        if let Some(cm) = &self.cm {
            let c = tw_sub(&tw_mul(&cm.rho, &self.rho_t)?, &tw_mul(&self.rho_t, &cm.rho)?);
            if !c.iter().all(mat_is_zero) {
                return Err(Error::ModelValidation(format!("ρ_{} does not commute with ρ_t", cm.name)));
            }
        }
        Ok(())
    }

    /// The Carlitz module ρ_t = θ + τ over F_q.
    pub fn carlitz(q: u64, n: i64) -> Result<Self> {
        let f = FieldDesc::for_q(q)?;
        let rho = vec![scalar(InfElem::theta(&f, 1, EXACT)), scalar(InfElem::one(&f, 1, EXACT))];
        TModule::new("carlitz", 1, rho, None, n)
    }

    /// The k-th tensor power of the Carlitz module: ρ_t = θ + N + E τ (dimension k).
    pub fn carlitz_tensor(q: u64, k: usize, n: i64) -> Result<Self> {
        let f = FieldDesc::for_q(q)?;
        let theta = InfElem::theta(&f, 1, EXACT);
        let one = InfElem::one(&f, 1, EXACT);
        let mut a0 = mat_zero(&theta, k, k);
        let mut a1 = mat_zero(&theta, k, k);
        for i in 0..k {
            a0[i][i] = theta.clone();
            if i + 1 < k {
                a0[i][i + 1] = one.clone();
            }
        }
        a1[k - 1][0] = one;
        TModule::new(&format!("carlitz-tensor:{k}"), 1, vec![a0, a1], None, n)
    }

    /// Drinfeld module with CM by F_q[t, y]/(y^{q−1} + t): ρ_y = w + τ, ρ_t = −ρ_y^{q−1},
    /// where w is the canonical (q−1)-th root of −θ.
    pub fn kummer(q: u64, n: i64) -> Result<Self> {
        // the canonical root is a monomial, hence exact
        let w = crate::special::carlitz_root(q, n)?.with_prec_exact(EXACT);
        let one = InfElem::one(w.field(), w.e(), EXACT);
        let rho_y: TwPoly = vec![scalar(w), scalar(one.clone())];
        let mut acc: TwPoly = vec![scalar(one)];
        for _ in 0..q - 1 {
            acc = tw_mul(&acc, &rho_y)?;
        }
        let rho_t: TwPoly = acc.iter().map(|m| vec![vec![m[0][0].neg()]]).collect();
        TModule::new(
            &format!("kummer-t:{q}"),
            (q - 1) as usize,
            rho_t,
            Some(CmAction { name: "y".into(), rho: rho_y }),
            n,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn rho_t(&self) -> &TwPoly {
        &self.rho_t
    }
    pub fn partial(&self) -> &Mat {
        &self.rho_t[0]
    }
    pub fn cm(&self) -> Option<&CmAction> {
        self.cm.as_ref()
    }
    /// Target absolute precision (valuation units).
    pub fn prec(&self) -> i64 {
        self.n
    }
    pub fn field(&self) -> &FieldDesc {
        self.rho_t[0][0][0].field()
    }
    pub fn e(&self) -> u32 {
        self.rho_t[0][0][0].e()
    }
    fn q(&self) -> i64 {
        self.field().q() as i64
    }
    pub(crate) fn work_prec(&self) -> i64 {
        (self.n + WORK_MARGIN) * self.e() as i64
    }

    /// Σ A_k z^{(k)}.
    pub fn apply(poly: &TwPoly, z: &[InfElem]) -> Result<Vec<InfElem>> {
        let mut acc = mat_vec(&poly[0], z);
        for (k, a) in poly.iter().enumerate().skip(1) {
            let zk: Vec<InfElem> = z.iter().map(|x| x.frobenius(k as i64)).collect::<Result<_>>()?;
            let t = mat_vec(a, &zk);
            acc = acc.iter().zip(&t).map(|(x, y)| x.add(y)).collect();
        }
        Ok(acc)
    }
    pub fn apply_t(&self, z: &[InfElem]) -> Result<Vec<InfElem>> {
        TModule::apply(&self.rho_t, z)
    }

    /// E_i: X·D^{(i)} − D·X = Σ_{k≥1} A_k E_{i−k}^{(k)}, D = ∂ρ_t.
    fn next_exp(&self, prev: &[Mat]) -> Result<Mat> {
        let i = prev.len();
        let d = self.d;
        let like = &self.rho_t[0][0][0];
        if i == 0 {
            return Ok(mat_identity(like, d));
        }
        let mut rhs = mat_zero(like, d, d);
        for (k, a) in self.rho_t.iter().enumerate().skip(1) {
            if k > i {
                break;
            }
            rhs = mat_add(&rhs, &mat_mul(a, &mat_frobenius(&prev[i - k], k as i64)?));
        }
        self.sylvester(i, &rhs).map_err(|_| Error::SingularRecursion(i))
    }

    /// N = ∂ρ_t − θ (nilpotent).
    fn nilpotent_part(&self) -> Mat {
        let like = &self.rho_t[0][0][0];
        let theta = InfElem::theta(like.field(), like.e(), crate::infinity::EXACT);
        let mut m = self.rho_t[0].clone();
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = row[k].sub(&theta);
        }
        m
    }

    /// (∂ρ_t)^{(i)} = θ^{q^i} + N^{(i)} with θ taken exactly.
    fn partial_twist(&self, i: usize) -> Result<Mat> {
        let like = &self.rho_t[0][0][0];
        let th = InfElem::theta(like.field(), like.e(), crate::infinity::EXACT).frobenius(i as i64)?;
        let mut m = mat_frobenius(&self.nilpotent_part(), i as i64)?;
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = row[k].add(&th);
        }
        Ok(m)
    }

    /// Solves X·(∂ρ_t)^{(i)} − ∂ρ_t·X = C. With D = θ + N this is
    /// (θ^{q^i} − θ)X = C − X N^{(i)} + N X, solved by iteration (N nilpotent).
    fn sylvester(&self, i: usize, c: &Mat) -> Result<Mat> {
        let like = &self.rho_t[0][0][0];
        let theta = InfElem::theta(like.field(), like.e(), crate::infinity::EXACT);
        let s = theta.frobenius(i as i64)?.sub(&theta);
        let s = s.truncate(s.order() + self.work_prec());
        let n = self.nilpotent_part();
        let ni = mat_frobenius(&n, i as i64)?;
        let div = |m: &Mat| -> Result<Mat> { m.iter().map(|r| r.iter().map(|x| x.div(&s)).collect()).collect() };
        let mut x = div(c)?;
        if self.d == 1 {
            return Ok(x);
        }
        for _ in 0..2 * self.d {
            let r = mat_add(&mat_sub(c, &mat_mul(&x, &ni)), &mat_mul(&n, &x));
            x = div(&r)?;
        }
        Ok(x)
    }

    /// E_i (cached).
    pub fn exp_coeff(&self, i: usize) -> Result<Mat> {
        let mut c = self.exp_cache.lock().unwrap();
        while c.len() <= i {
            let e = self.next_exp(&c)?;
            c.push(e);
        }
        Ok(c[i].clone())
    }
    /// Coefficients E_0 = Id, …, E_{i_max} of exp_ρ (relative precision ≈ N + margin).
    pub fn exp_coeffs(&self, imax: usize) -> Result<Vec<Mat>> {
        self.exp_coeff(imax)?;
        Ok(self.exp_cache.lock().unwrap()[..=imax].to_vec())
    }

    /// L_i (cached): L_0 = Id, L_m = −Σ_{n<m} L_n E_{m−n}^{(n)}.
    pub fn log_coeff(&self, i: usize) -> Result<Mat> {
        let mut c = self.log_cache.lock().unwrap();
        while c.len() <= i {
            let m = c.len();
            if m == 0 {
                c.push(self.exp_coeff(0)?);
                continue;
            }
            let like = &self.rho_t[0][0][0];
            let mut acc = mat_zero(like, self.d, self.d);
            for n in 0..m {
                let e = self.exp_coeff(m - n)?;
                acc = mat_add(&acc, &mat_mul(&c[n], &mat_frobenius(&e, n as i64)?));
            }
            let neg = acc.iter().map(|r| r.iter().map(|x| x.neg()).collect()).collect();
            c.push(neg);
        }
        Ok(c[i].clone())
    }
    pub fn log_coeffs(&self, imax: usize) -> Result<Vec<Mat>> {
        self.log_coeff(imax)?;
        Ok(self.log_cache.lock().unwrap()[..=imax].to_vec())
    }

    /// Residual of E_i D^{(i)} = Σ_k A_k E_{i−k}^{(k)}, as the least relative valuation gap.
    pub fn functional_equation_defect(&self, imax: usize) -> Result<Rat> {
        let e = self.exp_coeffs(imax)?;
        let dm = &self.rho_t[0];
        let mut worst = Rat::from(i64::MAX / 1024);
        for i in 1..=imax {
            let lhs = mat_mul(&e[i], &self.partial_twist(i)?);
            let mut rhs = mat_zero(&dm[0][0], self.d, self.d);
            for (k, a) in self.rho_t.iter().enumerate() {
                if k > i {
                    break;
                }
                rhs = mat_add(&rhs, &mat_mul(a, &mat_frobenius(&e[i - k], k as i64)?));
            }
            let gap = min_val(&mat_sub(&lhs, &rhs)) - min_val(&lhs);
            worst = worst.min(gap);
        }
        Ok(worst)
    }

    fn series_eval(&self, z: &[InfElem], logarithm: bool) -> Result<Vec<InfElem>> {
        let target = Rat::from(self.n + 2);
        let q = self.q();
        let vz = min_val_vec(z);
        let mut acc: Option<Vec<InfElem>> = None;
        let mut above = 0;
        let mut qi: i64 = 1;
        let mut prev: Option<Rat> = None;
        let mut falling = 0;
        for i in 0..200usize {
            let c = if logarithm { self.log_coeff(i)? } else { self.exp_coeff(i)? };
            let ci = &c;
            let bound = min_val(ci) + vz * Rat::from(qi);
            if prev.is_some_and(|p| bound < p) && bound <= target {
                falling += 1;
                if falling >= 4 && i >= self.rho_t.len() + 3 {
                    break;
                }
            } else {
                falling = 0;
            }
            prev = Some(bound);
            if bound > target {
                above += 1;
                if above >= 3 && i >= self.rho_t.len() {
                    return Ok(acc.unwrap());
                }
            } else {
                above = 0;
                let zi: Vec<InfElem> = z.iter().map(|x| x.frobenius(i as i64)).collect::<Result<_>>()?;
                let t = mat_vec(ci, &zi);
                acc = Some(match acc {
                    None => t,
                    Some(a) => a.iter().zip(&t).map(|(x, y)| x.add(y)).collect(),
                });
            }
            if acc.is_none() && i == 0 {
                acc = Some(z.iter().map(|x| x.scale(crate::Fe::ZERO).truncate((target * Rat::from(x.e() as i64)).ceil().to_integer())).collect());
            }
            qi = qi.checked_mul(q).ok_or(Error::ChainNotConverging)?;
            if qi > 1 << 50 {
                break;
            }
        }
        if logarithm {
            Err(Error::ChainNotConverging)
        } else {
            Err(Error::PrecisionExhausted("exponential series did not settle".into()))
        }
    }

    /// exp_ρ(z) to absolute precision about N.
    pub fn exp(&self, z: &[InfElem]) -> Result<Vec<InfElem>> {
        if z.iter().all(|x| x.is_zero()) {
            return Ok(z.to_vec());
        }
        self.series_eval(z, false)
    }
    /// log_ρ(z); ChainNotConverging outside the convergence disk.
    pub fn log(&self, z: &[InfElem]) -> Result<Vec<InfElem>> {
        if z.iter().all(|x| x.is_zero()) {
            return Ok(z.to_vec());
        }
        self.series_eval(z, true)
    }

    /// ∂ρ_t^{−1} z.
    pub fn partial_inv(&self, z: &[InfElem]) -> Result<Vec<InfElem>> {
        let like = &self.rho_t[0][0][0];
        let theta = InfElem::theta(like.field(), like.e(), EXACT);
        if self.d == 1 {
            return Ok(vec![z[0].div(&self.rho_t[0][0][0])?]);
        }
        // θ^{-1} Σ_k (−N/θ)^k z
        let n = self.nilpotent_part();
        let mut term: Vec<InfElem> = z.iter().map(|x| x.div(&theta)).collect::<Result<_>>()?;
        let mut acc = term.clone();
        for _ in 1..self.d {
            term = mat_vec(&n, &term).iter().map(|x| x.div(&theta).map(|y| y.neg())).collect::<Result<_>>()?;
            acc = acc.iter().zip(&term).map(|(a, b)| a.add(b)).collect();
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> TModuleJson {
        let enc = |p: &TwPoly| p.iter().map(|m| m.iter().map(|r| r.iter().map(|x| x.to_json()).collect()).collect()).collect();
        TModuleJson {
            name: self.name.clone(),
            d: self.d,
            r: self.rank,
            rho_t: enc(&self.rho_t),
            cm: self.cm.as_ref().map(|c| (c.name.clone(), enc(&c.rho))),
            prec_n: self.n,
            note: String::new(),
        }
    }
    pub fn from_json(j: &TModuleJson) -> Result<TModule> {
        let dec = |p: &Vec<Vec<Vec<InfElemJson>>>| -> Result<TwPoly> {
            p.iter().map(|m| m.iter().map(|r| r.iter().map(InfElem::from_json).collect()).collect()).collect()
        };
        let cm = match &j.cm {
            Some((name, p)) => Some(CmAction { name: name.clone(), rho: dec(p)? }),
            None => None,
        };
        TModule::new(&j.name, j.r, dec(&j.rho_t)?, cm, j.prec_n)
    }
}

/// Fixture schema for a t-module.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TModuleJson {
    pub name: String,
    pub d: usize,
    pub r: usize,
    pub rho_t: Vec<Vec<Vec<InfElemJson>>>,
    #[serde(default)]
    pub cm: Option<(String, Vec<Vec<Vec<InfElemJson>>>)>,
    #[serde(rename = "prec_N")]
    pub prec_n: i64,
    #[serde(default)]
    pub note: String,
}
