use std::io::{self, Write};
use std::path::Path;

use ctcsim::db_model::SolveMethod;
use ctcsim::heisenberg::TimeDistribution;
use ctcsim::qlinalg::{GateName, PureStateParams};
use ctcsim::scenario::{
    compare, named_scenario, run_db, run_heisenberg, validate_geometry, BlockSpec, CircuitSpec, ComparisonReport,
    Convention, GateExpr, GateFactor, GeometryConfig, GeometryVerdict, ScenarioError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::args::{
    CommonArgs, ConjectureArgs, GeometryArgs, ModelChoice, RunArgs, SolverChoice, SweepArgs, SweepParam,
};
use crate::record::{write_records, Component, Format, Model, RunRecord};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Engine(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Engine(_) | CliError::Io(_) => 1,
        }
    }
}

fn usage(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Resolves the scenario or config file and applies command-line overrides.
pub fn load_spec(args: &CommonArgs) -> Result<CircuitSpec, CliError> {
    let spec = match (&args.scenario, &args.config) {
        (Some(name), None) => named_scenario(name).map_err(usage)?,
        (None, Some(path)) => {
            CircuitSpec::from_toml_str(&read_file(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        (Some(_), Some(_)) => return Err(usage("give either a scenario name or --config, not both")),
        (None, None) => return Err(usage("a scenario name or --config is required")),
    };
    let alpha2 = args.alpha2.unwrap_or(spec.prep.alpha2());
    let theta = args.theta.unwrap_or(spec.prep.theta());
    let prep = PureStateParams::from_alpha2(alpha2, theta).map_err(|e| usage(format!("--alpha2/--theta: {e}")))?;
    let spec = spec.with_prep(prep);
    Ok(match (args.tau, args.d) {
        (None, None) => spec,
        (Some(tau), Some(d)) => spec.with_overlap(TimeDistribution::gaussian(d, tau).map_err(usage)?),
        _ => return Err(usage("--tau and --d must be given together")),
    })
}

fn solve_method(s: SolverChoice) -> SolveMethod {
    match s {
        SolverChoice::Eigen => SolveMethod::Eigen,
        SolverChoice::Iterate => SolveMethod::Iterate,
        SolverChoice::Both => SolveMethod::Both,
    }
}

fn blank(spec: &CircuitSpec, model: Model) -> RunRecord {
    RunRecord {
        scenario: spec.name.clone(),
        model,
        alpha2: spec.prep.alpha2(),
        theta: spec.prep.theta(),
        x: Component::Singular,
        y: Component::Singular,
        z: Component::Singular,
        residual: None,
        iterations: None,
        flags: String::new(),
        trace_distance: None,
    }
}

fn db_record(spec: &CircuitSpec, method: SolveMethod) -> Result<RunRecord, ScenarioError> {
    let r = run_db(spec, method)?;
    Ok(RunRecord {
        x: Component::Value(r.bloch.rx),
        y: Component::Value(r.bloch.ry),
        z: Component::Value(r.bloch.rz),
        residual: Some(r.residual),
        iterations: Some(r.iterations),
        flags: if r.degenerate { "degenerate".into() } else { String::new() },
        ..blank(spec, Model::Db)
    })
}

fn heisenberg_record(spec: &CircuitSpec) -> Result<RunRecord, ScenarioError> {
    let h = run_heisenberg(spec)?;
    Ok(RunRecord {
        x: h.x.into(),
        y: h.y.into(),
        z: h.z.into(),
        flags: if h.is_singular() { "singular".into() } else { String::new() },
        ..blank(spec, Model::Heisenberg)
    })
}

fn models(choice: ModelChoice) -> &'static [Model] {
    match choice {
        ModelChoice::Db => &[Model::Db],
        ModelChoice::Heisenberg => &[Model::Heisenberg],
        ModelChoice::Both => &[Model::Db, Model::Heisenberg],
    }
}

/// Evaluates each requested model; failures become diagnostics.
fn evaluate(spec: &CircuitSpec, choice: ModelChoice, method: SolveMethod) -> Vec<Result<RunRecord, String>> {
    models(choice)
        .iter()
        .map(|&m| {
            let r = match m {
                Model::Db => db_record(spec, method),
                Model::Heisenberg => heisenberg_record(spec),
            };
            r.map_err(|e| format!("{} engine, alpha2={}, theta={}: {e}", m, spec.prep.alpha2(), spec.prep.theta()))
        })
        .collect()
}

fn emit(
    results: Vec<Result<RunRecord, String>>,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let mut records = Vec::with_capacity(results.len());
    let mut failures = 0;
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(msg) => {
                writeln!(err, "error: {msg}")?;
                failures += 1;
            }
        }
    }
    write_records(format, &records, out)?;
    if failures > 0 {
        return Err(CliError::Engine(format!("{failures} evaluation(s) failed")));
    }
    Ok(())
}

pub fn cmd_run(args: &RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let spec = load_spec(&args.common)?;
    let results = evaluate(&spec, args.model, solve_method(args.common.solver));
    emit(results, args.common.format, out, err)
}

/// Inclusive grid from `from` to `to`.
pub fn grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if from.is_nan() || to.is_nan() || from >= to {
        return Err(usage(format!("--from ({from}) must be less than --to ({to})")));
    }
    if steps < 2 {
        return Err(usage("--steps must be at least 2"));
    }
    let last = steps - 1;
    Ok((0..steps).map(|i| if i == last { to } else { from + (to - from) * i as f64 / last as f64 }).collect())
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let base = load_spec(&args.run.common)?;
    let points = grid(args.from, args.to, args.steps)?;
    let specs = points
        .iter()
        .map(|&v| {
            let (a2, t) = match args.param {
                SweepParam::Alpha2 => (v, base.prep.theta()),
                SweepParam::Theta => (base.prep.alpha2(), v),
            };
            let p = PureStateParams::from_alpha2(a2, t).map_err(|e| usage(format!("sweep value {v}: {e}")))?;
            Ok(base.clone().with_prep(p))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let method = solve_method(args.run.common.solver);
    let results: Vec<Vec<Result<RunRecord, String>>> =
        specs.par_iter().map(|s| evaluate(s, args.run.model, method)).collect();
    emit(results.into_iter().flatten().collect(), args.run.common.format, out, err)
}

fn comparison_records(spec: &CircuitSpec, report: &ComparisonReport) -> Vec<Result<RunRecord, String>> {
    let flags = report.flags.to_string();
    let tag = |mut r: RunRecord| {
        r.flags = flags.clone();
        r.trace_distance = report.trace_distance;
        r
    };
    let db = report.db.clone().map(|r| {
        tag(RunRecord {
            x: Component::Value(r.bloch.rx),
            y: Component::Value(r.bloch.ry),
            z: Component::Value(r.bloch.rz),
            residual: Some(r.residual),
            iterations: Some(r.iterations),
            ..blank(spec, Model::Db)
        })
    });
    let heis = report
        .heisenberg
        .clone()
        .map(|h| tag(RunRecord { x: h.x.into(), y: h.y.into(), z: h.z.into(), ..blank(spec, Model::Heisenberg) }));
    vec![db.map_err(|e| format!("db engine: {e}")), heis.map_err(|e| format!("heisenberg engine: {e}"))]
}

/// Engine failures are reported through the `engine_error` flag; the
/// command only fails when neither engine produced a result.
pub fn cmd_compare(args: &CommonArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let spec = load_spec(args)?;
    let report = compare(&spec, &spec.prep, solve_method(args.solver));
    let results = comparison_records(&spec, &report);
    let all_failed = results.iter().all(Result::is_err);
    match emit(results, args.format, out, err) {
        Err(CliError::Engine(_)) if !all_failed => Ok(()),
        other => other,
    }
}

/// Returns whether the geometry is admissible.
pub fn cmd_geometry(args: &GeometryArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let text = read_file(&args.config)?;
    let g = GeometryConfig::from_toml_str(&text).map_err(|e| usage(format!("{}: {e}", args.config.display())))?;
    let verdict = validate_geometry(&g);
    let word = match verdict {
        GeometryVerdict::Ok { .. } => "ok",
        GeometryVerdict::Violation { .. } => "violation",
    };
    writeln!(out, "{word}: margin {} s", verdict.margin())?;
    Ok(verdict.is_ok())
}

const CLIFFORD_FACTORS: [GateFactor; 7] = [
    GateFactor::Two(GateName::Cnot),
    GateFactor::Two(GateName::Cz),
    GateFactor::Two(GateName::Swap),
    GateFactor::Pair(GateName::H, GateName::I2),
    GateFactor::Pair(GateName::I2, GateName::H),
    GateFactor::Pair(GateName::S, GateName::I2),
    GateFactor::Pair(GateName::I2, GateName::S),
];

#[derive(Debug, Default, PartialEq, Eq)]
pub struct ConjectureTally {
    pub samples: usize,
    pub agree: usize,
    pub diverge: usize,
    pub singular: usize,
    pub degenerate: usize,
    pub engine_error: usize,
}

/// Random `Ū` built from Clifford generators, prepared away from `α = β`.
fn random_case(rng: &mut ChaCha8Rng) -> (CircuitSpec, PureStateParams) {
    let n = rng.random_range(1..=8);
    let factors = (0..n).map(|_| CLIFFORD_FACTORS[rng.random_range(0..CLIFFORD_FACTORS.len())]).collect();
    let expr = GateExpr::new(factors);
    let p = loop {
        let p = PureStateParams::from_alpha2(rng.random_range(0.0..=1.0), rng.random_range(0.0..std::f64::consts::PI))
            .expect("sampled in range");
        if (p.alpha() - p.beta()).abs() > 1e-3 {
            break p;
        }
    };
    let spec = CircuitSpec {
        name: expr.to_string(),
        prep: p,
        blocks: vec![BlockSpec::new(expr, Convention::Bare)],
        locals: vec![GateName::I2; 2],
        overlap: TimeDistribution::OrthogonalLimit,
    };
    (spec, p)
}

/// Surveys random interactions. Mismatches are reported, never fatal.
pub fn cmd_conjecture(args: &ConjectureArgs, out: &mut dyn Write) -> Result<ConjectureTally, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut tally = ConjectureTally { samples: args.samples, ..Default::default() };
    let mut mismatches = Vec::new();
    let mut notes = Vec::new();
    for _ in 0..args.samples {
        let (spec, p) = random_case(&mut rng);
        let report = compare(&spec, &p, SolveMethod::Eigen);
        let f = report.flags;
        tally.agree += f.agree as usize;
        tally.diverge += f.diverge as usize;
        tally.singular += f.singular as usize;
        tally.degenerate += f.degenerate as usize;
        tally.engine_error += f.engine_error as usize;
        if !f.agree {
            notes.push(format!("{}  alpha2={:.6} theta={:.6}  {}", spec.name, p.alpha2(), p.theta(), f));
            mismatches.extend(comparison_records(&spec, &report).into_iter().flatten());
        }
    }
    match args.format {
        Format::Table => {
            writeln!(
                out,
                "samples {}  agree {}  diverge {}  singular {}  degenerate {}  engine_error {}",
                tally.samples, tally.agree, tally.diverge, tally.singular, tally.degenerate, tally.engine_error
            )?;
            for n in &notes {
                writeln!(out, "  {n}")?;
            }
        }
        other => write_records(other, &mismatches, out)?,
    }
    Ok(tally)
}
