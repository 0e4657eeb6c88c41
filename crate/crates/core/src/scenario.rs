//! Circuit specifications consumed by both engines.
//!
//! A [`CircuitSpec`] lists wormhole blocks, the local single-qubit gates
//! between them, the prepared state and the temporal overlap model. Each
//! block stores a gate expression plus a convention saying whether the
//! expression is the interaction `U` (`with_swap`) or the swapped form
//! `Ū = U then SWAP` (`bare`). The density-matrix engine consumes `U`, the
//! Heisenberg engine `Ū`; each is the other followed by a SWAP.
//!
//! Specs come from [`named_scenario`] or from a TOML file:
//!
//! ```toml
//! name = "my-circuit"
//! locals = ["I2", "I2"]
//!
//! [prep]
//! alpha2 = 0.75
//! theta = 0.0
//!
//! [[blocks]]
//! gate = "CNOT*SWAP"
//! convention = "with_swap"
//!
//! [overlap]
//! kind = "gaussian"
//! d = 1.0
//! tau = 2.0
//! ```
//!
//! Gate expressions are `*`-separated factors applied left to right. A
//! factor is a two-qubit gate name or `(A,B)` for single-qubit gates on the
//! upper and lower rail.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::db_model::{run_chain, DbBlock, DbError, SolveMethod};
use crate::heisenberg::{heisenberg_bloch, HeisenbergBloch, HeisenbergCircuit, HeisenbergError, TimeDistribution};
use crate::qlinalg::{
    bloch_from_density, density_from_bloch, local_pair, single_qubit_gate, trace_distance, two_qubit_gate, BlochVector,
    DensityMatrix, GateName, LinalgError, Mat2, Mat4, PureStateParams,
};
use crate::timed_pauli::{LocalClifford, PauliError, Tableau2};
use crate::tolerance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}` (expected one of: cz, cnot, chained_cnot_hadamard)")]
    UnknownScenario(String),
    #[error("config: {0}")]
    Parse(String),
    #[error("config field `{field}`: {reason}")]
    Field { field: String, reason: String },
    #[error(transparent)]
    Db(#[from] DbError),
    #[error(transparent)]
    Heisenberg(#[from] HeisenbergError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("gate is not Clifford, the Heisenberg engine cannot propagate it")]
    NotClifford,
}

fn field_err(field: impl Into<String>, reason: impl fmt::Display) -> ScenarioError {
    ScenarioError::Field { field: field.into(), reason: reason.to_string() }
}

/// One factor of a gate expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateFactor {
    Two(GateName),
    /// Single-qubit gates on the upper and lower rail.
    Pair(GateName, GateName),
}

impl GateFactor {
    pub fn matrix(&self) -> Result<Mat4, LinalgError> {
        match *self {
            GateFactor::Two(g) => two_qubit_gate(g),
            GateFactor::Pair(a, b) => Ok(local_pair(&single_qubit_gate(a)?, &single_qubit_gate(b)?)),
        }
    }
}

impl fmt::Display for GateFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateFactor::Two(g) => write!(f, "{g}"),
            GateFactor::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// A gate sequence in application order, written `A*B*...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GateExpr(Vec<GateFactor>);

impl GateExpr {
    pub fn new(factors: Vec<GateFactor>) -> Self {
        Self(factors)
    }

    pub fn of(names: &[GateName]) -> Self {
        Self(names.iter().map(|&g| GateFactor::Two(g)).collect())
    }

    pub fn factors(&self) -> &[GateFactor] {
        &self.0
    }

    /// Matrix of the whole sequence (last factor leftmost).
    pub fn matrix(&self) -> Result<Mat4, LinalgError> {
        self.0.iter().try_fold(Mat4::identity(), |acc, f| Ok(f.matrix()? * acc))
    }

    fn then_swap(&self) -> Self {
        let mut v = self.0.clone();
        v.push(GateFactor::Two(GateName::Swap));
        Self(v)
    }
}

impl FromStr for GateExpr {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut factors = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            let factor = match part.strip_prefix('(').and_then(|p| p.strip_suffix(')')) {
                Some(inner) => {
                    let (a, b) = inner.split_once(',').ok_or_else(|| LinalgError::UnknownGate(part.into()))?;
                    let (a, b): (GateName, GateName) = (a.trim().parse()?, b.trim().parse()?);
                    single_qubit_gate(a)?;
                    single_qubit_gate(b)?;
                    GateFactor::Pair(a, b)
                }
                None => {
                    let g: GateName = part.parse()?;
                    two_qubit_gate(g)?;
                    GateFactor::Two(g)
                }
            };
            factors.push(factor);
        }
        Ok(Self(factors))
    }
}

impl fmt::Display for GateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

impl TryFrom<String> for GateExpr {
    type Error = LinalgError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<GateExpr> for String {
    fn from(e: GateExpr) -> String {
        e.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// The expression is the interaction `U`.
    #[default]
    WithSwap,
    /// The expression is `Ū`, the interaction followed by a SWAP.
    Bare,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub gate: GateExpr,
    #[serde(default)]
    pub convention: Convention,
}

impl BlockSpec {
    pub fn new(gate: GateExpr, convention: Convention) -> Self {
        Self { gate, convention }
    }

    /// `U` for the density-matrix engine.
    pub fn db_unitary(&self) -> Result<Mat4, LinalgError> {
        match self.convention {
            Convention::WithSwap => self.gate.matrix(),
            Convention::Bare => self.gate.then_swap().matrix(),
        }
    }

    /// `Ū` for the Heisenberg engine.
    pub fn heisenberg_unitary(&self) -> Result<Mat4, LinalgError> {
        match self.convention {
            Convention::WithSwap => self.gate.then_swap().matrix(),
            Convention::Bare => self.gate.matrix(),
        }
    }

    /// The same block written in the other convention.
    pub fn flipped(&self) -> Self {
        match self.convention {
            Convention::WithSwap => Self::new(self.gate.then_swap(), Convention::Bare),
            Convention::Bare => Self::new(self.gate.then_swap(), Convention::WithSwap),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitSpec {
    pub name: String,
    pub prep: PureStateParams,
    pub blocks: Vec<BlockSpec>,
    /// One more than `blocks`: before, between and after the blocks.
    pub locals: Vec<GateName>,
    pub overlap: TimeDistribution,
}

pub const SCENARIO_NAMES: [&str; 3] = ["cz", "cnot", "chained_cnot_hadamard"];

/// Built-in scenarios, prepared with `α² = 0.75, θ = 0`.
pub fn named_scenario(name: &str) -> Result<CircuitSpec, ScenarioError> {
    use GateName::*;
    let with_swap = |g| BlockSpec::new(GateExpr::of(&[g, Swap]), Convention::WithSwap);
    let (blocks, locals) = match name {
        "cz" => (vec![with_swap(Cz)], vec![I2, I2]),
        "cnot" => (vec![with_swap(Cnot)], vec![I2, I2]),
        "chained_cnot_hadamard" => (vec![with_swap(Cnot), with_swap(Cnot)], vec![I2, H, H]),
        other => return Err(ScenarioError::UnknownScenario(other.to_string())),
    };
    let spec = CircuitSpec {
        name: name.to_string(),
        prep: PureStateParams::from_alpha2(0.75, 0.0)?,
        blocks,
        locals,
        overlap: TimeDistribution::OrthogonalLimit,
    };
    spec.validate()?;
    Ok(spec)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPrep {
    alpha2: f64,
    #[serde(default)]
    theta: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
enum OverlapKind {
    OrthogonalLimit,
    Gaussian,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOverlap {
    kind: OverlapKind,
    d: Option<f64>,
    tau: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    locals: Option<Vec<GateName>>,
    prep: Option<RawPrep>,
    #[serde(default)]
    blocks: Vec<BlockSpec>,
    overlap: Option<RawOverlap>,
    geometry: Option<GeometryConfig>,
}

fn parse_raw(text: &str) -> Result<RawConfig, ScenarioError> {
    toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string().trim_end().to_string()))
}

impl CircuitSpec {
    /// Reads a circuit from TOML text. `locals` defaults to identities and
    /// `prep` to `|0⟩`.
    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        let raw = parse_raw(text)?;
        if raw.blocks.is_empty() {
            return Err(field_err("blocks", "at least one block is required"));
        }
        let prep = match raw.prep {
            Some(p) => PureStateParams::from_alpha2(p.alpha2, p.theta).map_err(|e| field_err("prep.alpha2", e))?,
            None => PureStateParams::from_alpha2(1.0, 0.0)?,
        };
        let overlap = match raw.overlap {
            None | Some(RawOverlap { kind: OverlapKind::OrthogonalLimit, .. }) => TimeDistribution::OrthogonalLimit,
            Some(RawOverlap { kind: OverlapKind::Gaussian, d, tau }) => {
                let d = d.ok_or_else(|| field_err("overlap.d", "required for gaussian overlap"))?;
                let tau = tau.ok_or_else(|| field_err("overlap.tau", "required for gaussian overlap"))?;
                TimeDistribution::gaussian(d, tau).map_err(|e| field_err("overlap", e))?
            }
        };
        let locals = raw.locals.unwrap_or_else(|| vec![GateName::I2; raw.blocks.len() + 1]);
        let spec = CircuitSpec {
            name: raw.name.unwrap_or_else(|| "config".to_string()),
            prep,
            blocks: raw.blocks,
            locals,
            overlap,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.locals.len() != self.blocks.len() + 1 {
            return Err(field_err(
                "locals",
                format!("expected {} entries (blocks + 1), got {}", self.blocks.len() + 1, self.locals.len()),
            ));
        }
        for (i, g) in self.locals.iter().enumerate() {
            single_qubit_gate(*g).map_err(|e| field_err(format!("locals[{i}]"), e))?;
        }
        for (i, b) in self.blocks.iter().enumerate() {
            b.db_unitary().map_err(|e| field_err(format!("blocks[{i}].gate"), e))?;
        }
        Ok(())
    }

    pub fn with_prep(mut self, p: PureStateParams) -> Self {
        self.prep = p;
        self
    }

    pub fn with_overlap(mut self, t: TimeDistribution) -> Self {
        self.overlap = t;
        self
    }

    fn local_matrices(&self) -> Result<Vec<Mat2>, LinalgError> {
        self.locals.iter().map(|&g| single_qubit_gate(g)).collect()
    }

    pub fn db_blocks(&self) -> Result<Vec<DbBlock>, ScenarioError> {
        self.blocks.iter().map(|b| Ok(DbBlock::new(b.db_unitary()?)?)).collect()
    }

    pub fn heisenberg_circuit(&self) -> Result<HeisenbergCircuit, ScenarioError> {
        let clifford = |e: PauliError| match e {
            PauliError::NotClifford => ScenarioError::NotClifford,
            other => ScenarioError::Heisenberg(other.into()),
        };
        let blocks = self
            .blocks
            .iter()
            .map(|b| Tableau2::from_unitary(&b.heisenberg_unitary()?).map_err(clifford))
            .collect::<Result<Vec<_>, _>>()?;
        let locals = self
            .local_matrices()?
            .iter()
            .map(|m| LocalClifford::from_unitary(m).map_err(clifford))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HeisenbergCircuit::new(blocks, locals)?)
    }
}

/// Density-matrix engine result for a whole circuit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DbRun {
    pub output: DensityMatrix,
    pub bloch: BlochVector,
    /// Largest fixed-point residual over the blocks.
    pub residual: f64,
    /// Total solver iterations over the blocks.
    pub iterations: usize,
    pub degenerate: bool,
}

pub fn run_db(spec: &CircuitSpec, method: SolveMethod) -> Result<DbRun, ScenarioError> {
    let outcome = run_chain(&spec.db_blocks()?, &spec.local_matrices()?, &spec.prep, method)?;
    Ok(DbRun {
        output: outcome.output,
        bloch: bloch_from_density(&outcome.output),
        residual: outcome.solutions.iter().map(|s| s.residual).fold(0.0, f64::max),
        iterations: outcome.solutions.iter().map(|s| s.iterations).sum(),
        degenerate: outcome.degenerate(),
    })
}

pub fn run_heisenberg(spec: &CircuitSpec) -> Result<HeisenbergBloch, ScenarioError> {
    Ok(heisenberg_bloch(&spec.heisenberg_circuit()?, &spec.prep, &spec.overlap)?)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CompareFlags {
    pub agree: bool,
    pub diverge: bool,
    pub singular: bool,
    pub degenerate: bool,
    pub engine_error: bool,
}

impl CompareFlags {
    pub fn names(&self) -> Vec<&'static str> {
        [
            (self.agree, "agree"),
            (self.diverge, "diverge"),
            (self.singular, "singular"),
            (self.degenerate, "degenerate"),
            (self.engine_error, "engine_error"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect()
    }
}

impl fmt::Display for CompareFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names().join("|"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub db: Result<DbRun, ScenarioError>,
    pub heisenberg: Result<HeisenbergBloch, ScenarioError>,
    /// Present when both engines produced a full Bloch vector.
    pub trace_distance: Option<f64>,
    pub max_component_delta: Option<f64>,
    pub flags: CompareFlags,
}

impl ComparisonReport {
    pub fn bloch_db(&self) -> Option<BlochVector> {
        self.db.as_ref().ok().map(|r| r.bloch)
    }

    pub fn bloch_heisenberg(&self) -> Option<BlochVector> {
        self.heisenberg.as_ref().ok().and_then(|h| h.to_bloch())
    }
}

/// Runs both engines on `spec` prepared in `p` and compares their outputs.
pub fn compare(spec: &CircuitSpec, p: &PureStateParams, method: SolveMethod) -> ComparisonReport {
    let spec = spec.clone().with_prep(*p);
    let db = run_db(&spec, method);
    let heisenberg = run_heisenberg(&spec);

    let mut flags = CompareFlags {
        engine_error: db.is_err() || heisenberg.is_err(),
        degenerate: db.as_ref().is_ok_and(|r| r.degenerate),
        singular: heisenberg.as_ref().is_ok_and(|h| h.is_singular()),
        ..CompareFlags::default()
    };
    let mut trace = None;
    let mut delta = None;
    if let (Ok(d), Some(h)) = (&db, heisenberg.as_ref().ok().and_then(|h| h.to_bloch())) {
        let gap = d.bloch.max_component_delta(&h);
        delta = Some(gap);
        match density_from_bloch(&h) {
            Ok(rho_h) => trace = Some(trace_distance(&d.output, &rho_h)),
            Err(_) => flags.engine_error = true,
        }
        let clean = !flags.degenerate && !flags.engine_error;
        flags.agree = clean && gap < tolerance::COMPARISON;
        flags.diverge = gap >= tolerance::COMPARISON;
    }
    ComparisonReport { db, heisenberg, trace_distance: trace, max_component_delta: delta, flags }
}

/// Placement of the two wormhole mouths and the external apparatus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    /// Input mouth position (m).
    pub hi_position: [f64; 3],
    /// Output mouth position (m).
    pub ho_position: [f64; 3],
    /// Time for a signal to cross the apparatus outside the wormhole (s).
    pub external_transit_time: f64,
    #[serde(default = "speed_of_light")]
    pub c: f64,
    #[serde(default)]
    pub epsilon: [f64; 3],
    #[serde(default)]
    pub tau: f64,
    #[serde(default)]
    pub delta_x: [f64; 3],
    #[serde(default)]
    pub delta_t: f64,
}

fn speed_of_light() -> f64 {
    299_792_458.0
}

impl GeometryConfig {
    /// Reads the `[geometry]` table of a config file.
    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        let g = parse_raw(text)?.geometry.ok_or_else(|| field_err("geometry", "section is missing"))?;
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(field_err("geometry.c", "must be positive"));
        }
        if self.tau.is_nan() || self.tau < 0.0 {
            return Err(field_err("geometry.tau", "must be non-negative"));
        }
        if !self.external_transit_time.is_finite() {
            return Err(field_err("geometry.external_transit_time", "must be finite"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeometryVerdict {
    Ok { margin: f64 },
    Violation { margin: f64 },
}

impl GeometryVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, GeometryVerdict::Ok { .. })
    }

    /// Transit time minus the light-crossing time (s).
    pub fn margin(&self) -> f64 {
        match *self {
            GeometryVerdict::Ok { margin } | GeometryVerdict::Violation { margin } => margin,
        }
    }
}

/// Checks that no signal outside the wormhole crosses from input mouth to
/// output mouth faster than light. Equality is allowed.
pub fn validate_geometry(g: &GeometryConfig) -> GeometryVerdict {
    let dist = g.ho_position.iter().zip(&g.hi_position).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let margin = g.external_transit_time - dist / g.c;
    if margin >= 0.0 {
        GeometryVerdict::Ok { margin }
    } else {
        GeometryVerdict::Violation { margin }
    }
}
