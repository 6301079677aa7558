//! Truncated series in t with InfElem coefficients, Frobenius twists, evaluation at
//! t = θ and Frobenius difference equations.

mod matrix;
mod series;

pub use matrix::{check_difference_eq, det_power_of_t_minus_theta, DifferenceReport, TateMatrix};
pub use series::{Bound, Decay, TateSeries, TateSeriesJson};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{FPoly, FieldDesc, Var};
    use crate::infinity::{InfElem, EXACT};
    use crate::Rat;
    use proptest::prelude::*;

    fn th(f: &FieldDesc, k: i64, prec: i64) -> InfElem {
        InfElem::theta_pow(f, k, 1, prec)
    }

    #[test]
    fn twist_of_theta_t() {
        let f = FieldDesc::for_q(3).unwrap();
        let z = InfElem::zero(&f, 1, EXACT);
        let s = TateSeries::from_poly(vec![z, th(&f, 1, 40)], 4);
        let tw = s.twist(1).unwrap();
        assert!(tw.coeff(1).agrees_with(&th(&f, 3, 40)));
        assert!(tw.coeff(0).is_zero());
        let c = TateSeries::constant(InfElem::from_int(&f, 2, 1, 40), 4);
        assert!(c.twist(5).unwrap().coeff(0).agrees_with(c.coeff(0)));
        assert!(c.twist(-3).unwrap().coeff(0).agrees_with(c.coeff(0)));
    }

    #[test]
    fn evaluation_examples() {
        let f = FieldDesc::for_q(3).unwrap();
        let one = InfElem::one(&f, 1, 50);
        let s = TateSeries::from_poly(vec![one.clone(), one.clone()], 3);
        let v = s.eval_theta().unwrap();
        let expect = InfElem::from_poly(&FPoly::from_ints(&f, &[1, 1], Var::Theta), &f, 1, 50).unwrap();
        assert!(v.agrees_with(&expect));

        // Σ θ^{-2i} t^i at t = θ is 1/(1 − θ^{-1})
        let t = 60;
        let coeffs = (0..t).map(|i| th(&f, -2 * i as i64, 100)).collect();
        let g = TateSeries::new(coeffs, Decay::Linear { slope: Rat::from(2), offset: Rat::from(0) });
        let v = g.eval_theta().unwrap();
        let geo = one.div(&one.sub(&th(&f, -1, 50))).unwrap();
        assert!(v.agrees_with(&geo));
        assert!(v.prec() >= 50);

        let bad = TateSeries::new(vec![one.clone(); 4], Decay::None);
        assert!(matches!(bad.eval_theta(), Err(crate::Error::NoDecay(_))));
    }

    #[test]
    fn difference_eq_constant_solution() {
        // Φ = 1, Ψ = 1 satisfies Ψ^{(−1)} = ΦΨ; Ψ = 1 + θ does not
        let f = FieldDesc::for_q(3).unwrap();
        let one = TateSeries::constant(InfElem::one(&f, 1, 30), 8);
        let phi = TateMatrix::new(vec![vec![one.clone()]]);
        let r = check_difference_eq(&phi, &phi, Rat::from(20)).unwrap();
        assert!(r.pass);
        let bad = TateMatrix::new(vec![vec![TateSeries::constant(
            InfElem::one(&f, 1, 30).add(&th(&f, 1, 30)),
            8,
        )]]);
        assert!(!check_difference_eq(&phi, &bad, Rat::from(20)).unwrap().pass);
    }

    #[test]
    fn matrix_inverse_roundtrip() {
        let f = FieldDesc::for_q(5).unwrap();
        let c = |k: i64| TateSeries::from_poly(vec![InfElem::one(&f, 1, 40), th(&f, k, 40)], 6);
        let m = TateMatrix::new(vec![vec![c(-1), c(-2)], vec![c(-3).scale(&InfElem::from_int(&f, 2, 1, EXACT)), c(1)]]);
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..6 {
                    let x = id.entry(i, j).coeff(k);
                    let want = if i == j && k == 0 { 1 } else { 0 };
                    let d = x.sub(&InfElem::from_int(&f, want, 1, EXACT));
                    assert!(d.val_or_prec() >= Rat::from(25), "{i}{j}{k}: {d:?}");
                }
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let f = FieldDesc::for_q(7).unwrap();
        let s = TateSeries::new(
            (0..5).map(|i| th(&f, -i, 20).scale(f.from_int(i + 1))).collect(),
            Decay::Linear { slope: Rat::from(1), offset: Rat::new(-1, 2) },
        );
        let j = serde_json::to_string(&s.to_json()).unwrap();
        let back = TateSeries::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(j.contains("\"kind\":\"linear\""));
    }

    fn arb_series() -> impl Strategy<Value = TateSeries> {
        proptest::collection::vec((proptest::collection::vec(0u32..9, 1..5), -3i64..4), 6).prop_map(|v| {
            let f9 = FieldDesc::default_for(3, 1, 2).unwrap();
            let coeffs = v
                .into_iter()
                .map(|(c, s)| InfElem::from_coeffs(&f9, 1, s, c.into_iter().map(crate::Fe).collect(), 25))
                .collect();
            TateSeries::new(coeffs, Decay::None)
        })
    }

    proptest! {
        #[test]
        fn twist_roundtrip(s in arb_series()) {
            let back = s.twist(1).unwrap().twist(-1).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn twist_multiplicative(a in arb_series(), b in arb_series()) {
            let lhs = a.mul(&b).twist(1).unwrap();
            let rhs = a.twist(1).unwrap().mul(&b.twist(1).unwrap());
            for i in 0..lhs.t_len() {
                prop_assert!(lhs.coeff(i).agrees_with(rhs.coeff(i)));
            }
        }

        #[test]
        fn eval_is_multiplicative(a in arb_series(), b in arb_series()) {
            let dec = Decay::Polynomial { deg: 2 };
            let a = a.truncate_t(3).with_decay(dec.clone());
            let b = b.truncate_t(3).with_decay(dec.clone());
            // widen T so the product is exact
            let pad = |s: &TateSeries| {
                let mut c = s.coeffs().to_vec();
                let z = c[0].scale(crate::Fe::ZERO).with_prec_exact(EXACT);
                c.resize(6, z);
                TateSeries::new(c, dec.clone())
            };
            let (a, b) = (pad(&a), pad(&b));
            let ab = a.mul(&b).eval_theta().unwrap();
            let prod = a.eval_theta().unwrap().mul(&b.eval_theta().unwrap());
            prop_assert!(ab.agrees_with(&prod));
        }
    }
}
