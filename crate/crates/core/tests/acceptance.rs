//! End-to-end acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ffperiods::arith::{FPoly, Fe, FieldDesc, RatFunc, Var};
use ffperiods::cmtypes::{CMField, CMFieldModel};
use ffperiods::fixtures::Fixture;
use ffperiods::infinity::{InfElem, EXACT};
use ffperiods::relhunt::{
    certify_legendre, find_algebraic_relation, find_linear_relations, RelationBounds, RelationCertificate,
};
use ffperiods::special::{carlitz_period, carlitz_period_product, omega_series};
use ffperiods::tate::{check_difference_eq, TateMatrix, TateSeries};
use ffperiods::tmodule::{composition_defect, exp_log_exact, linalg, PsiOutput, TModule};
use ffperiods::Rat;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: String) -> Outcome {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn within(elapsed: Duration, limit: Duration, msg: String) -> Outcome {
    check(elapsed < limit, format!("{msg}; {:.2}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs()))
}

fn t_minus_theta(f: &FieldDesc, t: usize) -> TateSeries {
    TateSeries::from_poly(vec![InfElem::theta(f, 1, EXACT).neg(), InfElem::one(f, 1, EXACT)], t)
}

fn omega_functional_equation() -> Outcome {
    let st = Instant::now();
    let n = 200;
    let mut worst = Vec::new();
    for q in [2u64, 3] {
        let om = omega_series(q, 64, n).unwrap();
        let f = om.coeff(0).field().clone();
        let rep = check_difference_eq(
            &TateMatrix::new(vec![vec![t_minus_theta(&f, 64)]]),
            &TateMatrix::new(vec![vec![om]]),
            Rat::from(n - 10),
        )
        .unwrap();
        if !rep.pass {
            return Err(format!("q={q}: residual {}", rep.min_residual_val));
        }
        worst.push(format!("q={q}: {}", rep.min_residual_val));
    }
    within(st.elapsed(), Duration::from_secs(5), format!("residual valuations {}", worst.join(", ")))
}

fn pitilde_dual_formula() -> Outcome {
    let st = Instant::now();
    let n = 200;
    let mut vals = Vec::new();
    for q in [2u64, 3, 4] {
        let a = carlitz_period(q, n).unwrap();
        let b = carlitz_period_product(q, n).unwrap();
        let r = a.sub(&b).val_or_prec();
        if r < Rat::from(n - 10) {
            return Err(format!("q={q}: agreement only to {r}"));
        }
        vals.push(format!("q={q}: {r}"));
    }
    within(st.elapsed(), Duration::from_secs(5), format!("agreement {}", vals.join(", ")))
}

fn carlitz_kernel() -> Outcome {
    let n = 200;
    let mut parts = Vec::new();
    for q in [2u64, 3] {
        let c = TModule::carlitz(q, n).unwrap();
        let pi = carlitz_period(q, n).unwrap();
        let v = c.exp(&[pi]).unwrap()[0].val_or_prec();
        if v < Rat::from(n - 15) {
            return Err(format!("q={q}: val exp(π̃) = {v}"));
        }
        let f = FieldDesc::for_q(q).unwrap();
        let a = [
            RatFunc::from_poly(FPoly::var_poly(&f, Var::Theta)),
            RatFunc::from_poly(FPoly::one(&f, Var::Theta)),
        ];
        let (e, l) = exp_log_exact(&a, 6).unwrap();
        if !composition_defect(&e, &l).iter().all(|c| c.is_zero()) {
            return Err(format!("q={q}: exp∘log differs from the identity below τ^6"));
        }
        parts.push(format!("q={q}: val exp(π̃) ≥ {v}"));
    }
    Ok(format!("{}; exp∘log = id through τ^6", parts.join(", ")))
}

fn quasi_period_telescoping() -> Outcome {
    let n = 200;
    let c = TModule::carlitz(3, n).unwrap();
    let pi = carlitz_period(3, n).unwrap();
    let v = c.de_rham_pairing(1, 0, std::slice::from_ref(&pi)).unwrap().add(&pi).val_or_prec();
    check(v >= Rat::from(n - 15), format!("val([τ, π̃] + π̃) = {v}"))
}

fn tensor_power_symbols() -> Outcome {
    let n = 120;
    let mut parts = Vec::new();
    for k in 1..=3u32 {
        let name = if k == 1 { "carlitz".to_string() } else { format!("carlitz-tensor:{k}") };
        let fx = Fixture::load(&name, 3, n).unwrap();
        let out = fx.psi(64, Rat::from(n - 20)).unwrap();
        let p = &fx.motive.period_symbols(&out.psi_inv).unwrap()[0].value;
        let pik = carlitz_period(3, n).unwrap().pow(k as i64).unwrap();
        let ratio = p.div(&pik).unwrap();
        let ratio = ratio.truncate(ratio.e() as i64 * (n - 30));
        if ratio.terms().count() != 1 || ratio.order() != 0 {
            return Err(format!("n={k}: p/π̃^n = {}", ratio.render(4)));
        }
        parts.push(format!("n={k}: p/π̃^n = {}", ratio.render(1)));
    }
    Ok(parts.join(", "))
}

fn rank_formulas() -> Outcome {
    let st = Instant::now();
    let models = [
        CMFieldModel::rational(3),
        CMFieldModel::kummer_t(3).unwrap(),
        CMFieldModel::kummer_t(5).unwrap(),
        CMFieldModel::const_ext(3, 2).unwrap(),
    ];
    let mut parts = Vec::new();
    for m in models {
        let name = m.name.clone();
        let q = m.q as i64;
        let kummer = name.starts_with("kummer");
        let r = CMField::new(m, 40).unwrap().rank_ik0();
        if !r.agree || Rat::from(r.lattice_rank as i64) != r.formula {
            return Err(format!("{name}: Smith rank {} vs formula {}", r.lattice_rank, r.formula));
        }
        // 1 + (q−2)/(q−1)·#(A/t)^×, with #(A/t)^× = q − 1
        if kummer && r.lattice_rank as i64 != 1 + (q - 2) {
            return Err(format!("{name}: rank {} vs unit count formula", r.lattice_rank));
        }
        parts.push(format!("{name}: {}", r.lattice_rank));
    }
    within(st.elapsed(), Duration::from_secs(1), format!("ranks {}", parts.join(", ")))
}

fn motive_invariants() -> Outcome {
    let mut parts = Vec::new();
    for name in ["carlitz", "carlitz-tensor:2", "carlitz-tensor:3", "kummer-t:3", "kummer-t:5", "const-ext:2", "const-ext:3"] {
        let fx = Fixture::load(name, 3, 30).unwrap();
        let det = fx.motive.det_check();
        let sigma = fx.motive.sigma_ideal_check(&fx.xi).unwrap();
        let hp = fx.motive.hodge_pink_report();
        if !(det.pass && sigma.pass && hp.pass) {
            return Err(format!("{name}: det {} σ {} Hodge-Pink {:?} vs {:?}", det.pass, sigma.pass, hp.weights, hp.expected));
        }
        parts.push(format!("{name} {:?}", hp.weights));
    }
    Ok(format!("det, σ-ideal and weights hold for {}", parts.join(", ")))
}

fn pipeline_consistency(kummer: &Fixture, out: &PsiOutput, elapsed: Duration) -> Outcome {
    let rep = &out.report;
    let ok = rep.pass && rep.min_residual_val >= Rat::from(kummer.prec - 20);
    if !ok {
        return Err(format!("residual {} below {}", rep.min_residual_val, kummer.prec - 20));
    }
    within(elapsed, Duration::from_secs(120), format!("residual {} ({})", rep.min_residual_val, rep.form))
}

fn legendre(kummer: &Fixture, out: &PsiOutput) -> Outcome {
    let st = Instant::now();
    let bounds = RelationBounds { deg: 4, height: 40, margin: 20 };
    let syms: Vec<InfElem> = kummer.motive.period_symbols(&out.psi_inv).unwrap().into_iter().map(|s| s.value).collect();
    let pi = carlitz_period(3, kummer.prec).unwrap();
    let rep = certify_legendre(&[("xi_theta".into(), syms.clone())], &pi, 1, bounds).unwrap();
    let control = certify_legendre(&[("xi1".into(), vec![syms[0].clone()])], &pi, 1, bounds).unwrap();

    let n = 200;
    let c2 = Fixture::load("carlitz-tensor:2", 3, n).unwrap();
    let o2 = c2.psi(64, Rat::from(n - 20)).unwrap();
    let p2: Vec<InfElem> = c2.motive.period_symbols(&o2.psi_inv).unwrap().into_iter().map(|s| s.value).collect();
    let pi2 = carlitz_period(3, n).unwrap();
    let rep2 = certify_legendre(&[("xi_theta".into(), p2)], &pi2, 2, bounds).unwrap();

    let rel = |r: &ffperiods::relhunt::LegendreReport| {
        r.fibers[0].certificate.as_ref().map(|c| c.relation.clone()).unwrap_or_else(|| "NONE".into())
    };
    let msg = format!(
        "kummer-t:3 {}, carlitz-tensor:2 {}, single-symbol control {}",
        rel(&rep),
        rel(&rep2),
        if control.pass { "certified" } else { "NONE" }
    );
    if !(rep.pass && rep2.pass && !control.pass) {
        return Err(msg);
    }
    within(st.elapsed(), Duration::from_secs(180), msg)
}

fn de_rham_nondegenerate() -> Outcome {
    let k = TModule::kummer(3, 200).unwrap();
    let lat = k.period_lattice().unwrap();
    let rows: Vec<Vec<InfElem>> =
        lat.basis.iter().map(|l| vec![l[0].clone(), k.de_rham_pairing(1, 0, l).unwrap()]).collect();
    let det = linalg::det(&rows).unwrap();
    match det.val() {
        Some(v) => Ok(format!("det of the quasi-period matrix has valuation {v}")),
        None => Err("determinant vanishes at working precision".into()),
    }
}

fn random_series(rng: &mut ChaCha8Rng, f: &FieldDesc, prec: i64) -> InfElem {
    let els: Vec<Fe> = f.elements().collect();
    let start = rng.gen_range(-3..=3);
    let mut c: Vec<Fe> = (start..prec).map(|_| els[rng.gen_range(0..els.len())]).collect();
    c[0] = f.one();
    InfElem::from_coeffs(f, 1, start, c, prec)
}

fn random_poly(rng: &mut ChaCha8Rng, f: &FieldDesc, max_deg: usize) -> FPoly {
    let els: Vec<Fe> = f.elements().collect();
    let d = rng.gen_range(0..=max_deg);
    FPoly::new(f, (0..=d).map(|_| els[rng.gen_range(0..els.len())]).collect(), Var::Theta)
}

fn apply(p: &FPoly, v: &InfElem) -> InfElem {
    let mut acc = InfElem::zero(v.field(), v.e(), EXACT);
    for (j, &c) in p.coeffs().iter().enumerate() {
        acc = acc.add(&v.mul_theta_pow(j as i64).scale(c));
    }
    acc
}

/// Independent substitution check of a certificate against its values.
fn resubstitute(c: &RelationCertificate, values: &[InfElem]) -> bool {
    let v0 = &values[0];
    let mut s = InfElem::zero(v0.field(), v0.e(), EXACT);
    for (i, p) in c.polys().unwrap() {
        s = s.add(&apply(&p, &values[i]));
    }
    s.val_or_prec() >= c.precision - Rat::from(c.bounds.margin as i64)
}

fn relhunt_planted() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let (mut recovered, mut planted, mut false_certs, mut rejected) = (0, 0, 0, 0);
    let mut misses = Vec::new();
    for case in 0..100 {
        let q = [2u64, 3, 4, 5][case % 4];
        let f = FieldDesc::for_q(q).unwrap();
        planted += 1;
        match case % 10 {
            0..=5 => {
                let k = 2 + case % 2;
                let b = RelationBounds { deg: 0, height: 6, margin: 5 };
                let mut vals: Vec<InfElem> = (0..k).map(|_| random_series(&mut rng, &f, 120)).collect();
                let cs: Vec<FPoly> = (0..k).map(|_| random_poly(&mut rng, &f, 6)).collect();
                let last = vals.iter().zip(&cs).fold(InfElem::zero(&f, 1, EXACT), |a, (v, c)| a.add(&apply(c, v)));
                vals.push(last);
                let out = find_linear_relations(&vals, b).unwrap();
                rejected += out.rejected;
                false_certs += out.relations.iter().filter(|c| !resubstitute(c, &vals)).count();
                let mut want: Vec<(usize, FPoly)> = cs.into_iter().enumerate().collect();
                want.push((k, FPoly::constant(&f, f.from_int(-1), Var::Theta)));
                want.retain(|(_, p)| !p.is_zero());
                let lead = f.inv(want[0].1.lead());
                let want: Vec<(usize, FPoly)> = want.into_iter().map(|(i, p)| (i, p.scale(lead))).collect();
                if out.relations.len() == 1 && out.relations[0].polys().unwrap() == want {
                    recovered += 1;
                } else {
                    misses.push(format!("linear case {case}"));
                }
            }
            6..=8 => {
                let b = RelationBounds { deg: 2, height: 6, margin: 5 };
                let mut num = random_poly(&mut rng, &f, 3);
                while num.is_zero() {
                    num = random_poly(&mut rng, &f, 3);
                }
                let mut den = random_poly(&mut rng, &f, 3);
                if den.is_zero() {
                    den = FPoly::one(&f, Var::Theta);
                }
                let x = InfElem::from_poly(&num, &f, 1, 150).unwrap().div(&InfElem::from_poly(&den, &f, 1, 150).unwrap()).unwrap();
                match find_algebraic_relation(&x, b).unwrap() {
                    Some(c) => {
                        if !resubstitute(&c, &[InfElem::one(&f, 1, EXACT), x.clone(), x.mul(&x)]) {
                            false_certs += 1;
                        }
                        let ps = c.polys().unwrap();
                        let get = |i: usize| ps.iter().find(|(j, _)| *j == i).map(|(_, p)| p.clone()).unwrap_or(FPoly::zero(&f, Var::Theta));
                        if c.degree() == 1 && get(1).mul(&num).add(&get(0).mul(&den)).is_zero() {
                            recovered += 1;
                        } else {
                            misses.push(format!("rational case {case}"));
                        }
                    }
                    None => misses.push(format!("rational case {case}")),
                }
            }
            _ => {
                // x = g·θ^{1/2}·a(θ) satisfies X² − g²θa² = 0
                let b = RelationBounds { deg: 2, height: 7, margin: 5 };
                let els: Vec<Fe> = f.elements().filter(|x| !x.is_zero()).collect();
                let g = els[rng.gen_range(0..els.len())];
                let mut a = random_poly(&mut rng, &f, 3);
                if a.is_zero() {
                    a = FPoly::one(&f, Var::Theta);
                }
                let x = InfElem::from_poly(&a, &f, 2, EXACT).unwrap().mul(&InfElem::monomial(&f, g, -1, 2, EXACT));
                let c0 = a.mul(&a).shift(1).scale(f.neg(f.mul(g, g)));
                let want = vec![(2, FPoly::one(&f, Var::Theta)), (0, c0)];
                match find_algebraic_relation(&x, b).unwrap() {
                    Some(c) => {
                        if !resubstitute(&c, &[InfElem::one(&f, 2, EXACT), x.clone(), x.mul(&x)]) {
                            false_certs += 1;
                        }
                        if c.polys().unwrap() == want {
                            recovered += 1;
                        } else {
                            misses.push(format!("quadratic case {case}: {}", c.relation));
                        }
                    }
                    None => misses.push(format!("quadratic case {case}")),
                }
            }
        }
    }
    // unrelated values must not produce certificates
    for case in 0..20 {
        let f = FieldDesc::for_q([2u64, 3, 5][case % 3]).unwrap();
        let vals: Vec<InfElem> = (0..3).map(|_| random_series(&mut rng, &f, 120)).collect();
        let out = find_linear_relations(&vals, RelationBounds { deg: 0, height: 6, margin: 5 }).unwrap();
        false_certs += out.relations.len();
    }
    let msg = format!(
        "{recovered}/{planted} planted relations recovered, {false_certs} false certificates, {rejected} kernel vectors rejected by substitution"
    );
    if !misses.is_empty() {
        return Err(format!("{msg}; missed {}", misses.join(", ")));
    }
    check(recovered == planted && false_certs == 0, msg)
}

fn hb_control() -> Outcome {
    let k = TModule::kummer(3, 200).unwrap();
    let lat = k.period_lattice().unwrap();
    let vals: Vec<InfElem> = lat.basis.iter().map(|l| l[0].clone()).collect();
    let out = find_linear_relations(&vals, RelationBounds { deg: 0, height: 40, margin: 20 }).unwrap();
    check(
        out.is_empty(),
        format!("{} relation(s) among λ1, λ2 at H=40 ({} unknowns, {} rows): no relation within bounds", out.relations.len(), out.unknowns, out.rows),
    )
}

fn run(id: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let st = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let secs = st.elapsed().as_secs_f64();
    match &res {
        Ok(m) => println!("PASS {id:>2} {name}: {m} [{secs:.2}s]"),
        Err(m) => println!("FAIL {id:>2} {name}: {m} [{secs:.2}s]"),
    }
    res.is_ok()
}

#[test]
fn acceptance() {
    let mut ok = Vec::new();
    ok.push(run(1, "Ω functional equation", omega_functional_equation));
    ok.push(run(2, "π̃ dual formula", pitilde_dual_formula));
    ok.push(run(3, "Carlitz kernel and exp∘log", carlitz_kernel));
    ok.push(run(4, "quasi-period telescoping", quasi_period_telescoping));
    ok.push(run(5, "tensor-power symbols", tensor_power_symbols));
    ok.push(run(6, "rank formulas", rank_formulas));
    ok.push(run(7, "shtuka and motive invariants", motive_invariants));

    let st = Instant::now();
    let kummer = Fixture::load("kummer-t:3", 3, 300).unwrap();
    let psi = kummer.psi(64, Rat::from(280));
    let elapsed = st.elapsed();
    ok.push(run(8, "pipeline consistency", || match &psi {
        Ok(out) => pipeline_consistency(&kummer, out, elapsed),
        Err(e) => Err(format!("{e}")),
    }));
    ok.push(run(9, "Legendre certification", || match &psi {
        Ok(out) => legendre(&kummer, out),
        Err(e) => Err(format!("{e}")),
    }));
    ok.push(run(10, "de Rham non-degeneracy", de_rham_nondegenerate));
    ok.push(run(11, "relhunt soundness and completeness", relhunt_planted));
    ok.push(run(12, "HB coordinate control", hb_control));
    let failed: Vec<usize> = ok.iter().enumerate().filter(|(_, p)| !**p).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
