//! Laurent–Puiseux series in u = θ^{-1/e} over F_{q^m} with absolute precision.
//!
//! The canonical n-th root of an element has the leading coefficient of least
//! discrete-log index with respect to the field's recorded generator, and the
//! uniformizers θ^{-1/e} form one compatible system of roots.

mod elem;
mod roots;

pub use elem::{common_field, root_of_constant, InfElem, InfElemJson};
pub use roots::{newton_roots, poly_derivative, poly_eval, taylor_shift};

/// Precision used for elements that are exact (monomials, constants).
pub const EXACT: i64 = i64::MAX / 16;

/// Convention string recorded in reports.
pub const CANONICAL_ROOT: &str = "least-dlog-leading-coefficient";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{FPoly, FieldDesc, Var};
    use crate::Rat;
    use proptest::prelude::*;

    fn f3() -> FieldDesc {
        FieldDesc::for_q(3).unwrap()
    }

    fn theta_poly(f: &FieldDesc, c: &[i64], prec: i64) -> InfElem {
        InfElem::from_poly(&FPoly::from_ints(f, c, Var::Theta), f, 1, prec).unwrap()
    }

    #[test]
    fn product_of_linear_factors() {
        let f = f3();
        let a = theta_poly(&f, &[1, 1], 50);
        let b = theta_poly(&f, &[-1, 1], 50);
        assert!(a.mul(&b).agrees_with(&theta_poly(&f, &[-1, 0, 1], 50)));
    }

    #[test]
    fn geometric_series() {
        let f = f3();
        let one = InfElem::one(&f, 1, 5);
        let d = one.sub(&InfElem::theta_pow(&f, -1, 1, 5));
        let r = one.div(&d).unwrap();
        assert_eq!(r.prec(), 5);
        for k in 0..5 {
            assert_eq!(r.coeff(k), f.one());
        }
    }

    #[test]
    fn ramified_square() {
        let f9 = FieldDesc::default_for(3, 1, 2).unwrap();
        let g = f9
            .elements()
            .find(|&x| f9.mul(x, x) == f9.from_int(-1))
            .unwrap();
        let x = InfElem::monomial(&f9, g, -1, 2, 40);
        let sq = x.mul(&x);
        let minus_theta = InfElem::theta(&f9, 1, 20).scale(f9.from_int(-1)).lift_e(2);
        assert!(sq.agrees_with(&minus_theta));
        let fr = x.frobenius(1).unwrap();
        assert_eq!(fr.leading_exponent(), Some(-3));
        assert_eq!(fr.lead_coeff(), f9.neg(g));
    }

    #[test]
    fn frobenius_examples() {
        let f = f3();
        let t = InfElem::theta(&f, 1, 30);
        let t3 = t.frobenius(1).unwrap();
        assert_eq!(t3.leading_exponent(), Some(-3));
        assert_eq!(t3.terms().count(), 1);
        let c = InfElem::from_int(&f, 2, 1, 30);
        assert!(c.frobenius(4).unwrap().agrees_with(&c));
        assert!(t3.frobenius(-1).unwrap().agrees_with(&t));
        let bad = InfElem::theta(&f, 1, 30).add(&InfElem::one(&f, 1, 30)).mul_theta_pow(1);
        assert!(matches!(bad.frobenius(-1), Err(crate::Error::NotAPower(3))));
    }

    #[test]
    fn nth_root_examples() {
        let f = f3();
        let t2 = InfElem::theta_pow(&f, 2, 1, 40);
        let r = t2.nth_root(2).unwrap();
        assert!(r.mul(&r).agrees_with(&t2));
        let r0 = r.lead_coeff();
        // θ and −θ are both square roots; the canonical one has least-dlog leading coefficient
        assert_eq!(r0, r.field().one());

        let f2 = FieldDesc::for_q(2).unwrap();
        let mt = InfElem::theta(&f2, 1, 10).neg();
        assert!(mt.nth_root(1).unwrap().agrees_with(&InfElem::theta(&f2, 1, 10)));

        let mt3 = InfElem::theta(&f, 1, 40).neg();
        let s = mt3.nth_root(2).unwrap();
        assert_eq!(s.e(), 2);
        assert_eq!(s.field().m(), 2);
        let sf = s.field().clone();
        assert_eq!(sf.mul(s.lead_coeff(), s.lead_coeff()), sf.from_int(-1));
        assert!(s.mul(&s).agrees_with(&mt3));
    }

    #[test]
    fn nth_root_p_part() {
        let f = f3();
        let x = theta_poly(&f, &[1, 2, 0, 1], 60);
        let r = x.nth_root(3).unwrap();
        assert!(r.pow(3).unwrap().agrees_with(&x));
        let y = theta_poly(&f, &[1, 0, 1, 1], 80);
        let r = y.nth_root(6).unwrap();
        assert!(r.pow(6).unwrap().agrees_with(&y));
    }

    #[test]
    fn newton_roots_examples() {
        let f = f3();
        let c = |v: &[i64]| theta_poly(&f, v, 60);
        // y² + θ
        let r = newton_roots(&[c(&[0, 1]), c(&[0]), c(&[1])]).unwrap();
        assert_eq!(r.len(), 2);
        for (x, m) in &r {
            assert_eq!(*m, 1);
            assert_eq!(x.e(), 2);
            assert!(x.mul(x).agrees_with(&c(&[0, -1])));
        }
        assert!(r[0].0.add(&r[1].0).is_zero());
        // y² − θ²
        let r = newton_roots(&[c(&[0, 0, -1]), c(&[0]), c(&[1])]).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|(x, _)| x.agrees_with(&c(&[0, 1]))));
        assert!(r.iter().any(|(x, _)| x.agrees_with(&c(&[0, -1]))));
        // repeated root is rejected
        let sq = [c(&[0, 0, 1]), c(&[0, -2]), c(&[1])];
        assert!(matches!(newton_roots(&sq), Err(crate::Error::PrecisionExhausted(_))));
    }

    #[test]
    fn newton_roots_product_identity() {
        let f = FieldDesc::for_q(5).unwrap();
        let coeffs: Vec<InfElem> = [&[1, 0, 2][..], &[3, 1], &[0, 0, 0, 1], &[2], &[1]]
            .iter()
            .map(|v| InfElem::from_poly(&FPoly::from_ints(&f, v, Var::Theta), &f, 1, 80).unwrap())
            .collect();
        let roots = newton_roots(&coeffs).unwrap();
        assert_eq!(roots.len(), 4);
        let e = roots[0].0.e();
        let fld = roots[0].0.field().clone();
        let mut prod = vec![InfElem::one(&fld, e, EXACT)];
        for (r, _) in &roots {
            let mut next = vec![InfElem::zero(&fld, e, EXACT); prod.len() + 1];
            for (i, c) in prod.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].sub(&c.mul(r));
            }
            prod = next;
        }
        for (i, c) in coeffs.iter().enumerate() {
            let d = prod[i].sub(c);
            assert!(d.val_or_prec() >= Rat::from(60), "coefficient {i}: {:?}", d);
        }
    }

    #[test]
    fn json_roundtrip() {
        let f9 = FieldDesc::default_for(3, 1, 2).unwrap();
        let x = InfElem::theta(&f9, 1, 30).neg().nth_root(2).unwrap().add(&InfElem::one(&f9, 2, 50));
        let j = serde_json::to_string(&x.to_json()).unwrap();
        let back: InfElemJson = serde_json::from_str(&j).unwrap();
        let y = InfElem::from_json(&back).unwrap();
        assert_eq!(x, y);
        assert_eq!(serde_json::to_string(&y.to_json()).unwrap(), j);
        assert!(j.contains("prec_N"));
    }

    fn arb_elem() -> impl Strategy<Value = InfElem> {
        (proptest::collection::vec(0u32..9, 1..12), -6i64..6, 1u32..4, 20i64..40).prop_map(|(c, s, e, p)| {
            let f9 = FieldDesc::default_for(3, 1, 2).unwrap();
            let coeffs = c.into_iter().map(crate::Fe).collect();
            InfElem::from_coeffs(&f9, e, s, coeffs, s + p)
        })
    }

    proptest! {
        #[test]
        fn valuation_laws(a in arb_elem(), b in arb_elem()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let ab = a.mul(&b);
            prop_assert_eq!(ab.val().unwrap(), a.val().unwrap() + b.val().unwrap());
            let s = a.add(&b);
            let m = a.val().unwrap().min(b.val().unwrap());
            prop_assert!(s.val_or_prec() >= m || s.is_zero());
            if a.val() != b.val() && !s.is_zero() {
                prop_assert_eq!(s.val().unwrap(), m);
            }
        }

        #[test]
        fn frobenius_is_additive(a in arb_elem(), b in arb_elem()) {
            let lhs = a.add(&b).frobenius(1).unwrap();
            let rhs = a.frobenius(1).unwrap().add(&b.frobenius(1).unwrap());
            prop_assert!(lhs.agrees_with(&rhs));
            let back = a.frobenius(1).unwrap().frobenius(-1).unwrap();
            prop_assert!(back.agrees_with(&a));
        }

        #[test]
        fn nth_root_roundtrip(a in arb_elem(), n in 1u64..7) {
            prop_assume!(!a.is_zero());
            let r = a.nth_root(n).unwrap();
            let back = r.pow(n as i64).unwrap();
            prop_assert!(back.agrees_with(&a));
            prop_assert!(back.sub(&a.to_field(back.field()).unwrap().lift_e(back.e())).val_or_prec() >= a.prec_val());
        }
    }
}
