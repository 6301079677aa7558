use super::*;
use crate::arith::{FPoly, FieldDesc, RatFunc, Var};
use crate::infinity::InfElem;
use crate::special::{carlitz_period, omega_series};
use crate::tate::{check_difference_eq, TateMatrix, TateSeries};
use crate::Rat;

fn theta_rf(f: &FieldDesc) -> RatFunc {
    RatFunc::from_poly(FPoly::var_poly(f, Var::Theta))
}

fn one_rf(f: &FieldDesc) -> RatFunc {
    RatFunc::from_poly(FPoly::one(f, Var::Theta))
}

/// λ/π̃ is a nonzero constant of F_q up to the given valuation.
fn unit_ratio(lambda: &InfElem, pi: &InfElem, min: i64) -> bool {
    let r = lambda.div(pi).unwrap();
    if r.order() != 0 {
        return false;
    }
    let c = InfElem::constant(r.field(), r.lead_coeff(), r.e(), crate::infinity::EXACT);
    r.field().in_base(r.lead_coeff()) && r.sub(&c).val_or_prec() >= Rat::from(min)
}

#[test]
fn carlitz_exp_matches_factorials() {
    for q in [2u64, 3] {
        let f = FieldDesc::for_q(q).unwrap();
        let c = TModule::carlitz(q, 120).unwrap();
        let e = c.exp_coeffs(4).unwrap();
        let th = theta_rf(&f);
        let mut d = one_rf(&f);
        for (i, ei) in e.iter().enumerate() {
            if i > 0 {
                d = th.twist(i as u32).sub(&th).mul(&d.twist(1));
            }
            let want = InfElem::from_ratfunc(&one_rf(&f).div(&d).unwrap(), &f, 1, 400).unwrap();
            assert!(ei[0][0].agrees_with(&want), "q={q} i={i}");
            assert!(ei[0][0].rel_prec() >= 120);
        }
    }
}

#[test]
fn exact_exp_log_compose_to_identity() {
    for q in [2u64, 3] {
        let f = FieldDesc::for_q(q).unwrap();
        let (e, l) = exp_log_exact(&[theta_rf(&f), one_rf(&f)], 6).unwrap();
        assert!(composition_defect(&e, &l).iter().all(|c| c.is_zero()));
        // L_i = 1/((θ−θ^q)⋯(θ−θ^{q^i}))
        let th = theta_rf(&f);
        let mut prod = one_rf(&f);
        for (i, li) in l.iter().enumerate().skip(1) {
            prod = prod.mul(&th.sub(&th.twist(i as u32)));
            assert_eq!(li.mul(&prod), one_rf(&f));
        }
    }
}

#[test]
fn carlitz_exp_kills_pi() {
    for q in [2u64, 3] {
        let n = 200;
        let c = TModule::carlitz(q, n).unwrap();
        let pi = carlitz_period(q, n).unwrap();
        let ex = c.exp(std::slice::from_ref(&pi)).unwrap();
        assert!(ex[0].val_or_prec() >= Rat::from(n - 15), "{:?}", ex[0].val_or_prec());
        let half = c.exp(&[pi.mul_theta_pow(-1)]).unwrap();
        assert!(!half[0].is_zero());
    }
}

#[test]
fn exp_log_roundtrip_small_arguments() {
    let c = TModule::carlitz(3, 80).unwrap();
    let f = c.field().clone();
    for k in 1..5 {
        let x = InfElem::theta_pow(&f, -k, 1, 200).add(&InfElem::theta_pow(&f, -k - 2, 1, 200));
        let l = c.log(std::slice::from_ref(&x)).unwrap();
        let back = c.exp(&l).unwrap();
        assert!(back[0].sub(&x).val_or_prec() >= Rat::from(78));
    }
}

#[test]
fn kummer_first_exp_coefficient() {
    let k = TModule::kummer(3, 80).unwrap();
    let e = k.exp_coeffs(3).unwrap();
    let w = k.cm().unwrap().rho[0][0][0].clone();
    let th = InfElem::theta(w.field(), w.e(), 400);
    let want = w.mul(&th.sub(&InfElem::one(w.field(), w.e(), 400))).div(&th.pow(3).unwrap().sub(&th)).unwrap();
    assert!(e[1][0][0].agrees_with(&want));
    assert!(k.functional_equation_defect(6).unwrap() >= Rat::from(80));
    // ρ_t = θ + w(θ−1)τ − τ²
    let rt = k.rho_t();
    assert_eq!(rt.len(), 3);
    assert!(rt[0][0][0].agrees_with(&th));
    assert!(rt[2][0][0].agrees_with(&InfElem::from_int(w.field(), -1, w.e(), 400)));
}

#[test]
fn tensor_power_exp_satisfies_functional_equation() {
    let c = TModule::carlitz_tensor(3, 2, 60).unwrap();
    let e = c.exp_coeffs(4).unwrap();
    assert!(e[0][0][0].agrees_with(&InfElem::one(c.field(), 1, 100)));
    assert!(c.functional_equation_defect(4).unwrap() >= Rat::from(55));
}

#[test]
fn carlitz_torsion() {
    for q in [2u64, 3, 5] {
        let c = TModule::carlitz(q, 60).unwrap();
        let pts = c.torsion_points(1).unwrap();
        assert_eq!(pts.len(), q as usize);
        assert!(pts[0].points[0].is_zero());
        for ch in &pts[1..] {
            let x = &ch.points[0];
            let lhs = x.pow(q as i64 - 1).unwrap();
            let th = InfElem::theta(x.field(), x.e(), crate::infinity::EXACT);
            assert!(lhs.add(&th).val_or_prec() >= Rat::from(40));
        }
    }
    let c = TModule::carlitz(2, 40).unwrap();
    let pts = c.torsion_points(2).unwrap();
    assert_eq!(pts.len(), 4);
    for ch in &pts {
        let img = c.apply_t(&[ch.points[1].clone()]).unwrap();
        assert!(img[0].sub(&ch.points[0]).val_or_prec() >= Rat::from(20));
    }
}

#[test]
fn kummer_torsion_count() {
    let k = TModule::kummer(3, 60).unwrap();
    assert_eq!(k.torsion_points(1).unwrap().len(), 9);
}

#[test]
fn carlitz_lattice_is_pi() {
    for q in [2u64, 3] {
        let n = 120;
        let c = TModule::carlitz(q, n).unwrap();
        let lat = c.period_lattice().unwrap();
        assert_eq!(lat.rank(), 1);
        let l = &lat.basis[0][0];
        assert_eq!(l.val().unwrap(), Rat::new(-(q as i64), q as i64 - 1));
        let pi = carlitz_period(q, n).unwrap();
        assert!(unit_ratio(l, &pi, n - 20));
    }
}

#[test]
fn kummer_lattice_is_cm_stable() {
    let k = TModule::kummer(3, 100).unwrap();
    let lat = k.period_lattice().unwrap();
    assert_eq!(lat.rank(), 2);
    assert_eq!(lat.meta.action, "y");
    let w = k.cm().unwrap().rho[0][0][0].clone();
    for b in &lat.basis {
        let img = b[0].mul(&w);
        let coords = lat.coordinates(&img).unwrap().expect("y·λ must lie in the lattice");
        assert_eq!(coords.len(), 2);
    }
    // valuation separation of the reduced basis
    assert_ne!(lat.meta.valuations[0], lat.meta.valuations[1]);
}

#[test]
fn carlitz_agf_telescopes() {
    let q = 3;
    let n = 100;
    let c = TModule::carlitz(q, n).unwrap();
    let lat = c.period_lattice().unwrap();
    let f = c.agf(&lat.basis[0], 0, 32).unwrap();
    let f1 = f.twist(1).unwrap();
    let th = InfElem::theta(c.field(), 1, crate::infinity::EXACT);
    let lin = TateSeries::from_poly(vec![th.neg(), InfElem::one(c.field(), 1, crate::infinity::EXACT)], 32);
    let rhs = lin.mul(&f);
    let diff = f1.sub(&rhs);
    assert!(diff.coeffs()[..31].iter().all(|x| x.val_or_prec() >= Rat::from(n - 10)));
    let zero = c.agf(&[InfElem::zero(c.field(), 1, 400)], 0, 8).unwrap();
    assert!(zero.coeffs().iter().all(|x| x.is_zero()));
}

#[test]
fn carlitz_quasi_period() {
    let q = 3;
    let n = 200;
    let c = TModule::carlitz(q, n).unwrap();
    let lat = c.period_lattice().unwrap();
    let l = &lat.basis[0];
    let v = c.de_rham_pairing(1, 0, l).unwrap();
    assert!(v.add(&l[0]).val_or_prec() >= Rat::from(n - 15));
    let zero = c.de_rham_pairing(1, 0, &[InfElem::zero(c.field(), 1, 400)]).unwrap();
    assert!(zero.is_zero());
}

#[test]
fn carlitz_psi_is_omega() {
    let q = 3;
    let n = 100;
    let t = 32;
    let c = TModule::carlitz(q, n).unwrap();
    let lat = c.period_lattice().unwrap();
    let f = c.field().clone();
    let th = InfElem::theta(&f, 1, crate::infinity::EXACT);
    let phi = TateMatrix::new(vec![vec![TateSeries::from_poly(vec![th.neg(), InfElem::one(&f, 1, crate::infinity::EXACT)], t)]]);
    let out = build_psi(&c, &lat, &phi, PsiRecipe::CarlitzPower(1), t, Rat::from(n - 20)).unwrap();
    let om = omega_series(q, t, n).unwrap();
    let pi = carlitz_period(q, n).unwrap();
    let eps = lat.basis[0][0].div(&pi).unwrap().lead_coeff();
    for i in 0..t {
        let a = out.psi.entry(0, 0).coeff(i).scale(eps);
        assert!(a.sub(om.coeff(i)).val_or_prec() >= Rat::from(n - 20), "coefficient {i}");
    }
}

#[test]
fn kummer_psi_passes_difference_equation() {
    let q = 3;
    let n = 80;
    let t = 24;
    let k = TModule::kummer(q, n).unwrap();
    let lat = k.period_lattice().unwrap();
    let w = k.cm().unwrap().rho[0][0][0].clone().with_prec_exact(crate::infinity::EXACT);
    let f = w.field().clone();
    let e = w.e();
    let one = InfElem::one(&f, e, crate::infinity::EXACT);
    let zero = InfElem::zero(&f, e, crate::infinity::EXACT);
    let p = |c: Vec<InfElem>| TateSeries::from_poly(c, t);
    let phi = TateMatrix::new(vec![
        vec![p(vec![w.neg()]), p(vec![one.clone()])],
        vec![p(vec![zero, one.neg()]), p(vec![w.neg()])],
    ]);
    let out = build_psi(&k, &lat, &phi, PsiRecipe::Kummer, t, Rat::from(n - 20)).unwrap();
    assert!(out.report.pass);
    // a perturbed Φ is rejected
    let bad = TateMatrix::new(vec![
        vec![p(vec![w.clone()]), p(vec![one.clone()])],
        vec![p(vec![one.neg()]), p(vec![w.neg()])],
    ]);
    let rep = check_difference_eq(&bad, &out.psi, Rat::from(n - 20)).unwrap();
    assert!(!rep.pass);
}
