//! Argument model and pipeline orchestration for the `ffperiods` binary.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use ffperiods::cmtypes::{validate_cm_field, CMDivisor, CMField, CMFieldModel};
use ffperiods::fixtures::{Fixture, FixtureName};
use ffperiods::relhunt::{certify_legendre, find_algebraic_relation, find_linear_relations, RelationBounds};
use ffperiods::report::{RunConfig, RunReport};
use ffperiods::shtuka::motive_for;
use ffperiods::special::{carlitz_period, carlitz_period_product, gamma_pole_guard, geometric_gamma, omega_series, GammaSummary};
use ffperiods::tate::{check_difference_eq, TateMatrix, TateSeries};
use ffperiods::tmodule::linalg;
use ffperiods::{Error, FieldDesc, InfElem, InfElemJson, Rat, RatFunc, Var};

#[derive(Parser, Debug)]
#[command(name = "ffperiods", version, about = "Periods, CM motives and relation certificates over F_q(θ)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for the parallel stages.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Exit with status 4 when the run does not certify.
    #[arg(long, global = true)]
    pub require_pass: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Prec {
    #[arg(long, default_value_t = 3)]
    pub q: u64,
    /// Precision N in valuation units.
    #[arg(long, default_value_t = 200)]
    pub prec: i64,
}

#[derive(Args, Debug, Clone)]
pub struct Example {
    /// carlitz, carlitz-tensor:n, kummer-t:q or const-ext:l
    #[arg(long)]
    pub example: String,
    #[arg(long, default_value_t = 3)]
    pub q: u64,
    #[arg(long, default_value_t = 200)]
    pub prec: i64,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Bounds {
    #[arg(long, default_value_t = 4)]
    pub deg: usize,
    #[arg(long, default_value_t = 40)]
    pub height: usize,
    #[arg(long, default_value_t = 20)]
    pub margin: usize,
}

impl From<Bounds> for RelationBounds {
    fn from(b: Bounds) -> Self {
        RelationBounds { deg: b.deg, height: b.height, margin: b.margin }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ModelSel {
    /// Model definition file (JSON).
    #[arg(long, conflicts_with = "example")]
    pub model: Option<PathBuf>,
    /// Built-in model name (carlitz, kummer-t:q, const-ext:l, quartic-d2:q, cubic-f2, ...).
    #[arg(long)]
    pub example: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub q: u64,
    #[arg(long, default_value_t = 40)]
    pub prec: i64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The Carlitz period π̃ = 1/Ω(θ), cross-checked against the product formula.
    Pitilde(Prec),
    /// Ω(t) as a Tate series, with its functional-equation residual.
    Omega {
        #[command(flatten)]
        p: Prec,
        #[arg(long, default_value_t = 64)]
        trunc: usize,
    },
    /// The geometric gamma function at x ∈ F_q(θ).
    Gamma {
        #[command(flatten)]
        p: Prec,
        #[arg(long)]
        x: String,
    },
    /// CM field data.
    Cm {
        #[command(subcommand)]
        action: CmCommand,
    },
    /// Shtuka solutions and CM dual t-motives.
    Shtuka {
        #[command(subcommand)]
        action: ShtukaCommand,
    },
    /// Period lattice of a fixture's t-module.
    Periods(Example),
    /// Anderson generating function of a lattice vector.
    Agf {
        #[command(flatten)]
        ex: Example,
        #[arg(long, default_value_t = 64)]
        trunc: usize,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Quasi-period matrix [τ^k, λ_i].
    Qp(Example),
    /// Legendre certification of period symbols per fiber.
    Legendre {
        #[command(flatten)]
        ex: Example,
        #[arg(long, default_value_t = 64)]
        trunc: usize,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Relation search among values read from a JSON file.
    Relhunt {
        #[arg(long)]
        values: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
}

#[derive(Subcommand, Debug)]
pub enum CmCommand {
    Validate(ModelSel),
    Points(ModelSel),
    Rank(ModelSel),
    Xi0 {
        #[command(flatten)]
        sel: ModelSel,
        /// Point label (defaults to the first point).
        #[arg(long)]
        point: Option<String>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ShtukaArgs {
    #[command(flatten)]
    pub sel: ModelSel,
    /// CM divisor, e.g. "xi1 + 2*xi2" (defaults to the fixture's).
    #[arg(long)]
    pub xi: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum ShtukaCommand {
    /// Emit a motive fixture file.
    Build(ShtukaArgs),
    /// Determinant, σ-ideal and Hodge-Pink checks.
    Check(ShtukaArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Algebraic for a single value, linear otherwise.
    Auto,
    Linear,
    Algebraic,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    #[error("model validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 5,
            CliError::Core(e) => match e {
                Error::Parse(_) | Error::InvalidArgument(_) | Error::PoleArgument => 2,
                Error::PrecisionExhausted(_)
                | Error::InsufficientPrecision { .. }
                | Error::NoDecay(_)
                | Error::ChainNotConverging
                | Error::SingularRecursion(_)
                | Error::DivisionByApparentZero
                | Error::ConsistencyFailure(_) => 3,
                Error::ModelValidation(_)
                | Error::UnsupportedCoefficients(_)
                | Error::UnsupportedGenus
                | Error::RamifiedAboveTheta
                | Error::GaloisDataInsufficient(_)
                | Error::ModelMismatch => 5,
                _ => 1,
            },
            CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// A finished run: the report plus a short human-readable summary.
pub struct Outcome {
    pub report: RunReport,
    pub text: Vec<String>,
}

fn elem(x: &InfElem) -> Value {
    json!({ "value": x.to_json(), "text": x.render(6) })
}

fn rat(r: Rat) -> Value {
    json!(format!("{r}"))
}

fn config(q: u64, prec: Option<i64>, trunc: Option<usize>, bounds: Option<RelationBounds>, fields: &[&FieldDesc]) -> RunConfig {
    let mut c = RunConfig::new();
    c.q = Some(q);
    c.precision = prec;
    c.truncation = trunc;
    c.bounds = bounds;
    for f in fields {
        c = c.with_field(f);
    }
    c
}

/// Executes one command.
pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let start = Instant::now();
    let mut out = match &cli.command {
        Command::Pitilde(p) => pitilde(p)?,
        Command::Omega { p, trunc } => omega(p, *trunc)?,
        Command::Gamma { p, x } => gamma(p, x)?,
        Command::Cm { action } => cm(action)?,
        Command::Shtuka { action } => shtuka(action)?,
        Command::Periods(ex) => periods(ex)?,
        Command::Agf { ex, trunc, index } => agf(ex, *trunc, *index)?,
        Command::Qp(ex) => qp(ex)?,
        Command::Legendre { ex, trunc, bounds } => legendre(ex, *trunc, (*bounds).into())?,
        Command::Relhunt { values, bounds, mode } => relhunt(values, (*bounds).into(), *mode)?,
    };
    out.report = out.report.timed(start.elapsed());
    Ok(out)
}

fn pitilde(p: &Prec) -> CliResult<Outcome> {
    let pi = carlitz_period(p.q, p.prec)?;
    let prod = carlitz_period_product(p.q, p.prec)?;
    let diff = pi.sub(&prod);
    let residual = diff.val_or_prec();
    let pass = residual >= Rat::from(p.prec - 10);
    let payload = json!({ "pitilde": elem(&pi), "dual_formula_residual_val": rat(residual) });
    let cfg = config(p.q, Some(p.prec), None, None, &[pi.field()]);
    Ok(Outcome {
        report: RunReport::new("pitilde", cfg, payload).with_pass(pass),
        text: vec![format!("π̃ = {}", pi.render(6)), format!("dual formula residual valuation {residual}")],
    })
}

fn omega(p: &Prec, trunc: usize) -> CliResult<Outcome> {
    let om = omega_series(p.q, trunc, p.prec)?;
    let c0 = om.coeff(0);
    let f = c0.field().clone();
    let t_minus_theta = TateSeries::from_poly(
        vec![InfElem::theta(&f, c0.e(), ffperiods::infinity::EXACT).neg(), InfElem::one(&f, c0.e(), ffperiods::infinity::EXACT)],
        trunc,
    );
    let rep = check_difference_eq(
        &TateMatrix::new(vec![vec![t_minus_theta]]),
        &TateMatrix::new(vec![vec![om.clone()]]),
        Rat::from(p.prec - 10),
    )?;
    let payload = json!({ "omega": om.to_json(), "functional_equation": rep });
    let cfg = config(p.q, Some(p.prec), Some(trunc), None, &[&f]);
    Ok(Outcome {
        report: RunReport::new("omega", cfg, payload).with_pass(rep.pass),
        text: vec![
            format!("Ω(t) to t-degree {}, leading coefficient {}", trunc - 1, c0.render(4)),
            format!("functional equation residual valuation {}", rep.min_residual_val),
        ],
    })
}

fn gamma(p: &Prec, x: &str) -> CliResult<Outcome> {
    let f = FieldDesc::for_q(p.q)?;
    let x = RatFunc::parse(&f, x, Var::Theta)?;
    gamma_pole_guard(&x)?;
    let g = geometric_gamma(&x, p.prec)?;
    let summary = GammaSummary { degrees_used: g.degrees_used, tail_bound: g.tail_bound };
    let payload = json!({ "x": x.render(), "gamma": elem(&g.value), "summary": summary });
    let cfg = config(p.q, Some(p.prec), None, None, &[&f]);
    Ok(Outcome {
        report: RunReport::new("gamma", cfg, payload),
        text: vec![format!("Γ({}) = {}", x.render(), g.value.render(6)), format!("blocks used {}", g.degrees_used)],
    })
}

fn model_of(sel: &ModelSel) -> CliResult<CMFieldModel> {
    match (&sel.model, &sel.example) {
        (Some(path), _) => Ok(CMFieldModel::load(path)?),
        (None, Some(name)) => Ok(CMFieldModel::by_name(name, sel.q)?),
        (None, None) => Err(CliError::Usage("one of --model or --example is required".into())),
    }
}

fn cm(action: &CmCommand) -> CliResult<Outcome> {
    let sel = match action {
        CmCommand::Validate(s) | CmCommand::Points(s) | CmCommand::Rank(s) | CmCommand::Xi0 { sel: s, .. } => s,
    };
    let model = model_of(sel)?;
    let f = model.field()?;
    let cfg = config(model.q, Some(sel.prec), None, None, &[&f]);
    if let CmCommand::Validate(_) = action {
        let r = validate_cm_field(&model, sel.prec)?;
        if !r.pass {
            return Err(CliError::Validation(r.message.clone()));
        }
        let text = vec![format!("{}: CM field, {} place(s) of K⁺ above ∞", model.name, r.kplus_places)];
        return Ok(Outcome { report: RunReport::new("cm validate", cfg, json!(r)).with_pass(true), text });
    }
    let field = CMField::new(model.clone(), sel.prec)?;
    match action {
        CmCommand::Points(_) => {
            let pts: Vec<Value> = field
                .points
                .iter()
                .map(|p| json!({ "label": p.label, "fiber": p.fiber, "component": p.component, "nu": elem(&p.nu) }))
                .collect();
            let text = field.points.iter().map(|p| format!("{} [{}]: y = {}", p.label, p.fiber, p.nu.render(4))).collect();
            Ok(Outcome { report: RunReport::new("cm points", cfg.with_field(field.points[0].nu.field()), json!(pts)), text })
        }
        CmCommand::Rank(_) => {
            let r = field.rank_ik0();
            let text = vec![format!("rank I_K^0 = {} (formula {}, agree {})", r.lattice_rank, r.formula, r.agree)];
            Ok(Outcome { report: RunReport::new("cm rank", cfg, json!(r)).with_pass(r.agree), text })
        }
        CmCommand::Xi0 { point, .. } => {
            let label = point.clone().unwrap_or_else(|| field.points[0].label.clone());
            let c = field.nondegenerate_xi0(&label)?;
            let text = vec![format!("Ξ₀ = {} non-degenerate: {}", c.xi0.render(), c.nondegenerate)];
            Ok(Outcome { report: RunReport::new("cm xi0", cfg, json!(c)).with_pass(c.nondegenerate), text })
        }
        CmCommand::Validate(_) => unreachable!(),
    }
}

/// Model, divisor and (for fixture names) the paired t-module.
fn shtuka_inputs(a: &ShtukaArgs) -> CliResult<(CMField, CMDivisor, Option<Value>)> {
    let fixture = a.sel.example.as_deref().filter(|n| n.parse::<FixtureName>().is_ok());
    if let (Some(name), None) = (fixture, &a.xi) {
        let fx = Fixture::load(name, a.sel.q, a.sel.prec)?;
        return Ok((fx.cm.clone(), fx.xi.clone(), Some(json!(fx.tmodule.to_json()))));
    }
    let model = model_of(&a.sel)?;
    let cm = CMField::new(model, a.sel.prec)?;
    let xi = match &a.xi {
        Some(s) => CMDivisor::parse(s)?,
        None => CMDivisor::single(&cm.points[0].label, 1),
    };
    Ok((cm, xi, None))
}

fn shtuka(action: &ShtukaCommand) -> CliResult<Outcome> {
    let (ShtukaCommand::Build(a) | ShtukaCommand::Check(a)) = action;
    let (cm, xi, tmodule) = shtuka_inputs(a)?;
    let motive = motive_for(&cm, &xi)?;
    let f = cm.model.field()?;
    let cfg = config(cm.model.q, Some(a.sel.prec), None, None, &[&f]);
    match action {
        ShtukaCommand::Build(_) => {
            let mj = motive.to_json();
            let pass = mj.det.pass;
            let text = vec![
                format!("{} with Ξ = {}: rank {}, h = {}", cm.model.name, xi.render(), mj.rank, mj.h),
                format!("Φ = {:?}", mj.phi),
            ];
            let payload = json!({ "model": cm.model, "xi": xi, "motive": mj, "tmodule": tmodule });
            Ok(Outcome { report: RunReport::new("shtuka build", cfg, payload).with_pass(pass), text })
        }
        ShtukaCommand::Check(_) => {
            let det = motive.det_check();
            let sigma = motive.sigma_ideal_check(&xi)?;
            let hp = motive.hodge_pink_report();
            let pass = det.pass && sigma.pass && hp.pass;
            let text = vec![
                format!("det Φ = {} ({})", det.det, if det.pass { "PASS" } else { "FAIL" }),
                format!("σ-ideal check {}", if sigma.pass { "PASS" } else { "FAIL" }),
                format!("Hodge-Pink weights {:?} ({})", hp.weights, if hp.pass { "PASS" } else { "FAIL" }),
            ];
            let payload = json!({ "model": cm.model.name, "xi": xi, "det": det, "sigma": sigma, "hodge_pink": hp });
            Ok(Outcome { report: RunReport::new("shtuka check", cfg, payload).with_pass(pass), text })
        }
    }
}

fn fixture(ex: &Example) -> CliResult<Fixture> {
    Ok(Fixture::load(&ex.example, ex.q, ex.prec)?)
}

fn fixture_config(fx: &Fixture, trunc: Option<usize>, bounds: Option<RelationBounds>) -> RunConfig {
    let mut c = config(fx.q, Some(fx.prec), trunc, bounds, &[fx.tmodule.field()]);
    c.fixture = Some(fx.name.to_string());
    c
}

fn periods(ex: &Example) -> CliResult<Outcome> {
    let fx = fixture(ex)?;
    let lat = fx.lattice()?;
    let basis: Vec<Value> = lat.basis.iter().map(|v| json!(v.iter().map(elem).collect::<Vec<_>>())).collect();
    let mut payload = json!({ "tmodule": fx.tmodule.name(), "basis": basis, "meta": lat.meta });
    let mut text: Vec<String> = lat.basis.iter().enumerate().map(|(i, v)| format!("λ{} = {}", i + 1, v[0].render(5))).collect();
    let mut pass = lat.meta.exp_residuals.iter().all(|r| *r >= Rat::from(fx.prec - 15));
    if matches!(fx.name, FixtureName::Carlitz) {
        let pi = carlitz_period(fx.q, fx.prec)?;
        let ratio = lat.basis[0][0].div(&pi)?.truncate(lat.basis[0][0].e() as i64 * (fx.prec - 20));
        let unit = ratio.terms().count() == 1 && ratio.order() == 0;
        pass &= unit;
        payload["pitilde_ratio"] = elem(&ratio);
        text.push(format!("λ/π̃ = {} (unit: {unit})", ratio.render(3)));
    }
    let cfg = fixture_config(&fx, None, None);
    Ok(Outcome { report: RunReport::new("periods", cfg, payload).with_pass(pass), text })
}

fn agf(ex: &Example, trunc: usize, index: usize) -> CliResult<Outcome> {
    let fx = fixture(ex)?;
    let lat = fx.lattice()?;
    let lambda = lat.basis.get(index).ok_or_else(|| CliError::Usage(format!("lattice has {} vectors", lat.rank())))?;
    let rho = if fx.tmodule.d() == 1 { &fx.tmodule } else { &fx.psi_source.as_ref().unwrap().0 };
    let f = rho.agf(lambda, 0, trunc)?;
    let payload = json!({ "lambda_index": index, "agf": f.to_json() });
    let cfg = fixture_config(&fx, Some(trunc), None);
    Ok(Outcome {
        report: RunReport::new("agf", cfg, payload),
        text: vec![format!("f_λ{} to t-degree {}: constant term {}", index + 1, trunc - 1, f.coeff(0).render(4))],
    })
}

/// Quasi-period matrix rows [λ_i, [τ, λ_i], …, [τ^{r−1}, λ_i]] of a Drinfeld module.
pub fn quasi_period_matrix(fx: &Fixture) -> CliResult<Vec<Vec<InfElem>>> {
    if fx.tmodule.d() != 1 {
        return Err(CliError::Usage("quasi-periods need a Drinfeld module fixture".into()));
    }
    let lat = fx.lattice()?;
    let r = fx.tmodule.rank();
    let mut rows = Vec::with_capacity(r);
    for lam in &lat.basis {
        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            row.push(fx.tmodule.de_rham_pairing(k as u32, 0, lam)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

fn qp(ex: &Example) -> CliResult<Outcome> {
    let fx = fixture(ex)?;
    let rows = quasi_period_matrix(&fx)?;
    let det = linalg::det(&rows)?;
    let pass = !det.is_zero();
    let payload = json!({
        "matrix": rows.iter().map(|r| r.iter().map(elem).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "det": elem(&det),
        "det_val": det.val().map(rat),
    });
    let cfg = fixture_config(&fx, None, None);
    let text = vec![format!("det of the {0}×{0} quasi-period matrix has valuation {1}", rows.len(), det.val().map_or("∞ (zero)".to_string(), |v| v.to_string()))];
    Ok(Outcome { report: RunReport::new("qp", cfg, payload).with_pass(pass), text })
}

fn legendre(ex: &Example, trunc: usize, bounds: RelationBounds) -> CliResult<Outcome> {
    let fx = fixture(ex)?;
    let psi = fx.psi(trunc, Rat::from(fx.prec - 20))?;
    let syms = fx.motive.period_symbols(&psi.psi_inv)?;
    let mut fibers: BTreeMap<String, Vec<InfElem>> = BTreeMap::new();
    for s in &syms {
        fibers.entry(fx.cm.point(&s.point)?.fiber.clone()).or_default().push(s.value.clone());
    }
    let fibers: Vec<(String, Vec<InfElem>)> = fibers.into_iter().collect();
    let wt = fx.cm.cm_weight(&fx.xi).wt().ok_or_else(|| CliError::Usage("Ξ is not in I_K^0".into()))?;
    let pi = carlitz_period(fx.q, fx.prec)?;
    let rep = certify_legendre(&fibers, &pi, wt, bounds)?;
    let control = match fibers.iter().find(|(_, v)| v.len() > 1) {
        Some((name, v)) => {
            let c = certify_legendre(&[(format!("{name}:{}", syms[0].point), vec![v[0].clone()])], &pi, wt, bounds)?;
            Some(c)
        }
        None => None,
    };
    let mut text = vec![format!("difference equation residual {} ({})", psi.report.min_residual_val, psi.report.form)];
    for f in &rep.fibers {
        text.push(match &f.certificate {
            Some(c) => format!("fiber {}: certified, {}", f.fiber, c.relation),
            None => format!("fiber {}: NONE within bounds", f.fiber),
        });
    }
    if let Some(c) = &control {
        text.push(format!("single-symbol control: {}", if c.pass { "certified" } else { "NONE within bounds" }));
    }
    let certs = rep.fibers.iter().filter_map(|f| f.certificate.as_ref()).map(|c| json!(c)).collect();
    let payload = json!({
        "symbols": syms.iter().map(|s| json!({ "point": s.point, "value": elem(&s.value) })).collect::<Vec<_>>(),
        "difference_equation": psi.report,
        "legendre": rep,
        "control": control,
    });
    let cfg = fixture_config(&fx, Some(trunc), Some(bounds)).with_field(pi.field());
    let pass = rep.pass && psi.report.pass;
    Ok(Outcome { report: RunReport::new("legendre", cfg, payload).with_certificates(certs).with_pass(pass), text })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ValuesFile {
    List(Vec<ValueEntry>),
    Wrapped { values: Vec<ValueEntry> },
}

/// A bare element, or the `{value, text}` form that reports emit.
#[derive(Deserialize)]
#[serde(untagged)]
enum ValueEntry {
    Bare(InfElemJson),
    Reported { value: InfElemJson },
}

impl ValueEntry {
    fn json(&self) -> &InfElemJson {
        match self {
            ValueEntry::Bare(j) | ValueEntry::Reported { value: j } => j,
        }
    }
}

pub fn read_values(path: &Path) -> CliResult<Vec<InfElem>> {
    let s = std::fs::read_to_string(path)?;
    let list = match serde_json::from_str::<ValuesFile>(&s)? {
        ValuesFile::List(v) | ValuesFile::Wrapped { values: v } => v,
    };
    if list.is_empty() {
        return Err(CliError::Usage("values file is empty".into()));
    }
    Ok(list.iter().map(|v| InfElem::from_json(v.json())).collect::<ffperiods::Result<Vec<_>>>()?)
}

fn relhunt(path: &Path, bounds: RelationBounds, mode: Mode) -> CliResult<Outcome> {
    let values = read_values(path)?;
    let algebraic = match mode {
        Mode::Auto => values.len() == 1,
        Mode::Linear => false,
        Mode::Algebraic => {
            if values.len() != 1 {
                return Err(CliError::Usage("algebraic mode takes exactly one value".into()));
            }
            true
        }
    };
    let f = values[0].field().clone();
    let cfg = config(f.q(), None, None, Some(bounds), &[&f]);
    if algebraic {
        let c = find_algebraic_relation(&values[0], bounds)?;
        let text = vec![match &c {
            Some(c) => format!("{} (residual valuation {}, {})", c.relation, c.residual_val, c.scope),
            None => "NONE within bounds".to_string(),
        }];
        let pass = c.is_some();
        let certs = c.iter().map(|c| json!(c)).collect();
        let payload = json!({ "mode": "algebraic", "certificate": c, "scope": ffperiods::relhunt::SCOPE });
        return Ok(Outcome { report: RunReport::new("relhunt", cfg, payload).with_certificates(certs).with_pass(pass), text });
    }
    let rels = find_linear_relations(&values, bounds)?;
    let mut text: Vec<String> = rels.relations.iter().map(|c| c.relation.clone()).collect();
    if text.is_empty() {
        text.push("no relation within bounds".into());
    }
    let certs = rels.relations.iter().map(|c| json!(c)).collect();
    let pass = !rels.is_empty();
    let payload = json!({ "mode": "linear", "result": rels });
    Ok(Outcome { report: RunReport::new("relhunt", cfg, payload).with_certificates(certs).with_pass(pass), text })
}
