//! Ω, the Carlitz period π̃, Carlitz tensor powers and the geometric gamma function.

mod gamma;
mod omega;
mod tensor;

pub use gamma::{gamma_of, gamma_pole_guard, geometric_gamma, GammaSummary, GammaValue};
pub use omega::{carlitz_period, carlitz_period_product, carlitz_root, omega_series};
pub use tensor::{carlitz_tensor_motive, carlitz_tensor_psi, omega_power};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{FPoly, FieldDesc, RatFunc, Var};
    use crate::infinity::{InfElem, EXACT};
    use crate::tate::{check_difference_eq, TateMatrix, TateSeries};
    use crate::Rat;

    fn t_minus_theta(like: &InfElem, t: usize) -> TateSeries {
        let f = like.field().clone();
        let e = like.e();
        TateSeries::from_poly(vec![InfElem::theta(&f, e, EXACT).neg(), InfElem::one(&f, e, EXACT)], t)
    }

    #[test]
    fn omega_functional_equation() {
        for q in [2u64, 3] {
            let n = 200;
            let om = omega_series(q, 64, n).unwrap();
            assert!(om.decay_ok());
            let phi = TateMatrix::new(vec![vec![t_minus_theta(om.coeff(0), 64)]]);
            let psi = TateMatrix::new(vec![vec![om.clone()]]);
            let rep = check_difference_eq(&phi, &psi, Rat::from(n - 10)).unwrap();
            assert!(rep.pass, "q={q}: {:?}", rep.min_residual_val);
            // inverse twist form, coefficientwise
            let lhs = om.twist(-1).unwrap();
            let rhs = t_minus_theta(om.coeff(0), 64).mul(&om);
            for i in 0..64 {
                let d = lhs.coeff(i).sub(rhs.coeff(i));
                assert!(d.val_or_prec() >= Rat::from(n / q as i64 - 10), "q={q} i={i}");
            }
            // planted defect
            let one = TateSeries::constant(InfElem::one(om.coeff(0).field(), om.coeff(0).e(), EXACT), 64);
            let bad = TateMatrix::new(vec![vec![om.add(&one)]]);
            let rep = check_difference_eq(&phi, &bad, Rat::from(n - 10)).unwrap();
            assert!(!rep.pass && rep.min_residual_val <= Rat::from(0));
        }
    }

    #[test]
    fn omega_constant_term_and_value() {
        for q in [2u64, 3, 4, 5] {
            let om = omega_series(q, 16, 60).unwrap();
            let rho = carlitz_root(q, 80).unwrap();
            let pre = rho.pow(-(q as i64)).unwrap();
            assert!(om.coeff(0).agrees_with(&pre));
            let v = om.eval_theta().unwrap();
            assert_eq!(v.val().unwrap(), Rat::new(q as i64, q as i64 - 1));
        }
    }

    #[test]
    fn pitilde_dual_formula() {
        let p = carlitz_period(2, 120).unwrap();
        let d = carlitz_period_product(2, 120).unwrap();
        assert!(p.sub(&d).val_or_prec() >= Rat::from(110));
        for q in [3u64, 4, 5] {
            let p = carlitz_period(q, 80).unwrap();
            let d = carlitz_period_product(q, 80).unwrap();
            assert!(p.sub(&d).val_or_prec() >= Rat::from(70));
            assert_eq!(p.val().unwrap(), Rat::new(-(q as i64), q as i64 - 1));
        }
    }

    fn brute_block(f: &FieldDesc, x: &InfElem, d: usize) -> InfElem {
        let q = f.q() as usize;
        let mut prod = InfElem::one(f, 1, x.prec());
        for idx in 0..q.pow(d as u32) {
            let mut c = Vec::new();
            let mut k = idx;
            for _ in 0..d {
                c.push(f.elements().nth(k % q).unwrap());
                k /= q;
            }
            c.push(f.one());
            let a = InfElem::from_poly(&FPoly::new(f, c, Var::Theta), f, 1, x.prec()).unwrap();
            prod = prod.mul(&InfElem::one(f, 1, x.prec()).add(&x.div(&a).unwrap()));
        }
        prod
    }

    #[test]
    fn gamma_blocks_match_enumeration() {
        let f = FieldDesc::for_q(3).unwrap();
        let x = RatFunc::parse(&f, "(theta+2)/(theta^2+1)", Var::Theta).unwrap();
        let xe = InfElem::from_ratfunc(&x, &f, 1, 40).unwrap();
        let g = gamma_of(&xe, 30).unwrap();
        let mut prod = InfElem::one(&f, 1, 40);
        for d in 0..4 {
            prod = prod.mul(&brute_block(&f, &xe, d));
        }
        let direct = xe.mul(&prod).inv().unwrap();
        assert!(g.value.sub(&direct).val_or_prec() >= Rat::from(28));
    }

    #[test]
    fn gamma_examples() {
        let f3 = FieldDesc::for_q(3).unwrap();
        let x = RatFunc::parse(&f3, "theta^-8", Var::Theta).unwrap();
        let g = geometric_gamma(&x, 40).unwrap();
        let xe = InfElem::from_ratfunc(&x, &f3, 1, 60).unwrap();
        let r = g.value.mul(&xe).sub(&InfElem::one(&f3, 1, EXACT));
        assert!(r.val_or_prec() >= Rat::from(8));

        let f2 = FieldDesc::for_q(2).unwrap();
        let one = RatFunc::parse(&f2, "1", Var::Theta).unwrap();
        assert!(matches!(geometric_gamma(&one, 20), Err(crate::Error::PoleArgument)));
        let m = RatFunc::parse(&f3, "-theta-1", Var::Theta).unwrap();
        assert!(matches!(geometric_gamma(&m, 20), Err(crate::Error::PoleArgument)));
        let z = RatFunc::parse(&f3, "0", Var::Theta).unwrap();
        assert!(matches!(geometric_gamma(&z, 20), Err(crate::Error::PoleArgument)));
        let _ = RatFunc::from_poly(FPoly::one(&f3, Var::Theta));
    }

    #[test]
    fn carlitz_tensor_square() {
        let m = carlitz_tensor_motive(3, 2).unwrap();
        assert_eq!(m.rank(), 1);
        assert!(m.det_check().pass);
        let psi = carlitz_tensor_psi(3, 2, 24, 30).unwrap();
        let rep = check_difference_eq(&m.phi_tate(24).unwrap(), &psi, Rat::from(20)).unwrap();
        assert!(rep.pass, "{rep:?}");
        let pi = carlitz_period(3, 30).unwrap();
        let v = psi.entry(0, 0).eval_theta().unwrap().inv().unwrap();
        assert!(v.agrees_with(&pi.mul(&pi)));
        assert!(carlitz_tensor_motive(3, 0).is_err());
    }
}
