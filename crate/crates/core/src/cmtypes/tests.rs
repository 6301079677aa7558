use super::*;
use crate::special::carlitz_root;
use crate::Rat;

const N: i64 = 40;

fn field(m: CMFieldModel) -> CMField {
    CMField::new(m, N).unwrap()
}

#[test]
fn validation_examples() {
    let r = validate_cm_field(&CMFieldModel::kummer_t(3).unwrap(), N).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.witnesses[0].places, vec![(2, 1)]);
    let r = validate_cm_field(&CMFieldModel::const_ext(3, 2).unwrap(), N).unwrap();
    assert!(r.pass);
    let r = validate_cm_field(&CMFieldModel::cubic_f2(), N).unwrap();
    assert!(!r.pass);
    assert_eq!(r.witnesses[0].places.len(), 2);
    let r = validate_cm_field(&CMFieldModel::quartic_d2(3).unwrap(), N).unwrap();
    assert!(r.pass && r.totally_real, "{r:?}");
    assert_eq!(r.kplus_places, 2);
    assert!(validate_cm_field(&CMFieldModel::rational(5), N).unwrap().pass);
}

#[test]
fn points_kummer_match_carlitz_root() {
    let k = field(CMFieldModel::kummer_t(3).unwrap());
    assert_eq!(k.labels(), vec!["xi1", "xi2"]);
    let rho = carlitz_root(3, N).unwrap();
    assert!(k.points[0].nu.agrees_with(&rho));
    assert!(k.points[1].nu.agrees_with(&rho.neg()));
    assert_eq!(k.points[0].nu.val(), Some(Rat::new(-1, 2)));
    let f = CMFieldModel::kummer_t(3).unwrap().field().unwrap();
    let m = CMFieldModel::kummer_t(3).unwrap().m_at(&f, N).unwrap();
    for p in &k.points {
        assert!(crate::infinity::poly_eval(&m, &p.nu).is_zero());
    }
}

#[test]
fn points_rational_and_const_ext() {
    let c = field(CMFieldModel::rational(3));
    assert_eq!(c.labels(), vec!["xi_theta"]);
    let ce = field(CMFieldModel::const_ext(3, 2).unwrap());
    assert_eq!(ce.points.len(), 2);
    assert_eq!(ce.points[1].component, Some(1));
    let f = ce.points[0].nu.field();
    let b0 = ce.points[0].nu.lead_coeff();
    assert_eq!(f.frobenius(ce.points[1].nu.lead_coeff(), 1), b0);
}

#[test]
fn weights_and_decomposition() {
    let k = field(CMFieldModel::kummer_t(3).unwrap());
    let w = k.cm_weight(&CMDivisor::single("xi1", 1));
    assert_eq!(w, Weight::Weight { wt: 1, generalized_cm_type: true, cm_type: true });
    let c = field(CMFieldModel::rational(3));
    assert_eq!(c.cm_weight(&CMDivisor::single("xi_theta", 4)).wt(), Some(4));
    let quart = field(CMFieldModel::quartic_d2(3).unwrap());
    let one_fiber: Vec<_> = quart.points.iter().filter(|p| p.fiber == "eta1").collect();
    assert_eq!(one_fiber.len(), 2);
    assert_eq!(quart.cm_weight(&CMDivisor::single(&one_fiber[0].label, 1)), Weight::NotInIk0);

    let d = k.decompose_cm_type(&CMDivisor::single("xi1", 2)).unwrap();
    assert_eq!(d, vec![CMDivisor::single("xi1", 1); 2]);
    let d = k.decompose_cm_type(&k.norm_divisor()).unwrap();
    assert_eq!(d, vec![CMDivisor::single("xi1", 1), CMDivisor::single("xi2", 1)]);
    let x = CMDivisor::parse("xi1 + 2*xi2").unwrap();
    let d = k.decompose_cm_type(&x).unwrap();
    assert_eq!(d.len(), 3);
    assert_eq!(d.iter().fold(CMDivisor::zero(), |a, b| a.add(b)), x);
}

#[test]
fn inflate_restrict() {
    let k = field(CMFieldModel::kummer_t(3).unwrap());
    let base = CMDivisor::single("xi_theta", 1);
    let inf = k.inflate_from_base(&base).unwrap();
    assert_eq!(inf, CMDivisor::parse("xi1 + xi2").unwrap());
    assert_eq!(k.restrict_to_base(&inf).unwrap(), base.scale(2));
    assert_eq!(k.restrict_to_base(&CMDivisor::single("xi1", 1)).unwrap(), base);
    let quart = field(CMFieldModel::quartic_d2(3).unwrap());
    let kp = CMDivisor::parse("eta1 + 3*eta2").unwrap();
    assert_eq!(quart.restrict_to_kplus(&quart.inflate_from_kplus(&kp).unwrap()).unwrap(), kp.scale(2));
    let insep = CMFieldModel {
        name: "insep".into(),
        m: vec![vec![0, 1], vec![], vec![], vec![1]],
        ..CMFieldModel::kummer_t(3).unwrap()
    };
    assert!(!separable_at_theta(&insep).unwrap());
}

#[test]
fn infinity_reduction() {
    let c = field(CMFieldModel::rational(3));
    let i = c.reduction_at_infinity(&CMDivisor::single("xi_theta", 3)).unwrap();
    assert_eq!(i.places.get("y=∞"), Some(&3));
    let k = field(CMFieldModel::kummer_t(3).unwrap());
    let i = k.reduction_at_infinity(&CMDivisor::parse("xi1 + xi2").unwrap()).unwrap();
    assert_eq!(i.degree(), 2);
    assert_eq!(i.places.len(), 1);
    assert_ne!(i.terms[0].residue, i.terms[1].residue);
    let q = field(CMFieldModel::quartic_d2(3).unwrap());
    let i = q.reduction_at_infinity(&q.norm_divisor()).unwrap();
    assert_eq!(i.places.len(), 2);
    assert_eq!(i.degree(), 4);
}

#[test]
fn ranks() {
    let k3 = field(CMFieldModel::kummer_t(3).unwrap());
    assert_eq!(k3.galois_rank(&CMDivisor::single("xi1", 1)).unwrap(), 2);
    let r = k3.rank_ik0();
    assert!(r.agree);
    assert_eq!(r.lattice_rank, 2);
    let k5 = field(CMFieldModel::kummer_t(5).unwrap());
    let r = k5.rank_ik0();
    assert_eq!((r.lattice_rank, r.formula, r.cyclotomic), (4, Rat::from(4), Some(4)));
    let c = field(CMFieldModel::rational(3));
    assert_eq!(c.galois_rank(&CMDivisor::single("xi_theta", 1)).unwrap(), 1);
    let q = field(CMFieldModel::quartic_d2(3).unwrap());
    let r = q.rank_ik0();
    assert!(r.agree);
    assert_eq!(r.lattice_rank, 3);
    let ce = field(CMFieldModel::const_ext(3, 3).unwrap());
    assert_eq!(ce.rank_ik0().lattice_rank, 3);
    assert_eq!(ce.galois_rank(&CMDivisor::single("xi0", 1)).unwrap(), 3);
}

#[test]
fn galois_data_must_be_transitive() {
    let mut m = CMFieldModel::kummer_t(5).unwrap();
    m.automorphisms = vec![Automorphism::Scale { dlog: 2 }];
    let k = field(m);
    assert!(matches!(k.galois_rank(&CMDivisor::single("xi1", 1)), Err(crate::Error::GaloisDataInsufficient(_))));
}

#[test]
fn xi0_certificates() {
    let k3 = field(CMFieldModel::kummer_t(3).unwrap());
    let c = k3.nondegenerate_xi0("xi1").unwrap();
    assert_eq!(c.xi0, CMDivisor::single("xi1", 2));
    assert!(c.nondegenerate);
    assert_eq!(c.galois_rank, 2);
    let k5 = field(CMFieldModel::kummer_t(5).unwrap());
    let c = k5.nondegenerate_xi0("xi1").unwrap();
    assert_eq!((c.xi0.clone(), c.galois_rank), (CMDivisor::single("xi1", 4), 4));
    let r = field(CMFieldModel::rational(3)).nondegenerate_xi0("xi_theta").unwrap();
    assert_eq!(r.xi0, CMDivisor::single("xi_theta", 1));
    let q = field(CMFieldModel::quartic_d2(3).unwrap());
    let c = q.nondegenerate_xi0("xi1").unwrap();
    assert!(c.nondegenerate, "{c:?}");
}

#[test]
fn model_json_round_trip() {
    for m in [
        CMFieldModel::rational(3),
        CMFieldModel::kummer_t(3).unwrap(),
        CMFieldModel::const_ext(3, 2).unwrap(),
        CMFieldModel::quartic_d2(5).unwrap(),
        CMFieldModel::cubic_f2(),
    ] {
        assert_eq!(CMFieldModel::from_json(&m.to_json()).unwrap(), m);
    }
    let div = CMDivisor::parse(r#"{"xi1": 2, "xi2": 0}"#).unwrap();
    assert_eq!(serde_json::to_string(&div).unwrap(), r#"{"xi1":2}"#);
}

#[test]
fn shipped_model_files_match_builtins() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    for (file, m) in [
        ("kummer-t-3.json", CMFieldModel::kummer_t(3).unwrap()),
        ("kummer-t-5.json", CMFieldModel::kummer_t(5).unwrap()),
        ("carlitz-3.json", CMFieldModel::rational(3)),
        ("const-ext-2.json", CMFieldModel::const_ext(3, 2).unwrap()),
        ("quartic-d2-3.json", CMFieldModel::quartic_d2(3).unwrap()),
        ("cubic-f2.json", CMFieldModel::cubic_f2()),
    ] {
        assert_eq!(CMFieldModel::load(&dir.join(file)).unwrap(), m, "{file}");
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn restrict_inflate_scales(a in -5i64..6, b in -5i64..6) {
            let q = CMField::new(CMFieldModel::quartic_d2(3).unwrap(), 30).unwrap();
            let mut d = CMDivisor::zero();
            d.add_point("eta1", a);
            d.add_point("eta2", b);
            prop_assert_eq!(q.restrict_to_kplus(&q.inflate_from_kplus(&d).unwrap()).unwrap(), d.scale(2));
            let base = CMDivisor::single("xi_theta", a);
            prop_assert_eq!(q.restrict_to_base(&q.inflate_from_base(&base).unwrap()).unwrap(), base.scale(4));
        }

        #[test]
        fn orbit_rank_stable(ms in proptest::collection::vec(0i64..4, 4)) {
            let k = CMField::new(CMFieldModel::kummer_t(5).unwrap(), 30).unwrap();
            let mut d = CMDivisor::zero();
            for (p, m) in k.labels().iter().zip(&ms) {
                d.add_point(p, *m);
            }
            prop_assume!(!d.is_zero());
            let r = k.galois_rank(&d).unwrap();
            prop_assert!(r <= 4);
            let labels = k.labels();
            let v: Vec<i64> = labels.iter().map(|l| d.get(l)).collect();
            let group = k.galois_group().unwrap();
            let mut rows: Vec<Vec<i64>> = group.iter().map(|g| (0..4).map(|i| v[g[i]]).collect()).collect();
            // images of orbit elements under every generator again
            for s in k.galois_generators().unwrap() {
                let extra: Vec<Vec<i64>> = rows.iter().map(|w| (0..4).map(|i| w[s[i]]).collect()).collect();
                rows.extend(extra);
            }
            prop_assert_eq!(integer_rank(&rows), r);
            let i = k.reduction_at_infinity(&d).unwrap();
            prop_assert_eq!(i.degree(), d.degree());
        }
    }
}
