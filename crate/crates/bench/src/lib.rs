//! Shared workloads for the criterion benches.

use ffperiods::fixtures::Fixture;
use ffperiods::infinity::InfElem;
use ffperiods::relhunt::{find_algebraic_relation, RelationBounds, RelationCertificate};
use ffperiods::special::{carlitz_period, omega_series};
use ffperiods::tmodule::{Lattice, TModule};
use ffperiods::{FieldDesc, Rat};

pub fn omega(q: u64, t: usize, n: i64) {
    omega_series(q, t, n).expect("omega series");
}

pub fn pitilde(q: u64, n: i64) -> InfElem {
    carlitz_period(q, n).expect("carlitz period")
}

pub fn kummer_lattice(q: u64, n: i64) -> Lattice {
    TModule::kummer(q, n).and_then(|m| m.period_lattice()).expect("kummer lattice")
}

/// Ψ for a fixture, thresholded 20 below its precision.
pub fn fixture_psi(name: &str, q: u64, n: i64, t: usize) {
    let fx = Fixture::load(name, q, n).expect("fixture");
    fx.psi(t, Rat::from(n - 20)).expect("psi");
}

/// Square root of θ, recovered as a quadratic relation.
pub fn sqrt_theta_relation(q: u64, n: i64) -> RelationCertificate {
    let f = FieldDesc::for_q(q).expect("field");
    let v = InfElem::monomial(&f, f.one(), -1, 2, n * 2);
    let b = RelationBounds { deg: 4, height: 6, margin: 5 };
    find_algebraic_relation(&v, b).expect("relhunt").expect("relation")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_run() {
        assert_eq!(pitilde(3, 30).val_or_prec(), Rat::new(-3, 2));
        omega(3, 8, 30);
        assert_eq!(kummer_lattice(3, 40).rank(), 2);
        fixture_psi("carlitz", 3, 40, 16);
        assert_eq!(sqrt_theta_relation(3, 40).degree(), 2);
    }
}
