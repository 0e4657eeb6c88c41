//! Heisenberg-picture treatment of the same scattering problem.
//!
//! In the unfolded circuit the incoming qubit passes the gate `Ū` on the
//! upper rail, enters the wormhole, re-emerges one shift `τ` earlier on the
//! lower rail and passes `Ū` again before being measured. An observable is
//! pulled back through the gate one time label at a time: at label `k` the
//! upper output is whatever the lower input was at label `k − 1` (the
//! wormhole adds one prime), the lower output is the measured letter at
//! label `k`, and conjugating the pair through `Ū` yields the upper input
//! letter at `k` plus the lower input that feeds label `k + 1`.
//!
//! Once the measured word is exhausted the recurrence state is a single
//! letter, so it cycles within five steps. A fixed point that emits the
//! identity closes the word; one that emits a letter becomes a tail.
//!
//! Expectation values are taken against the prepared state with distinct
//! labels treated as non-overlapping histories, or with a Gaussian overlap
//! for words touching at most two labels.

use std::collections::HashMap;

use thiserror::Error;

use crate::qlinalg::{BlochVector, PureStateParams};
use crate::timed_pauli::{
    apply_local, conj_pair, letter_mul, LocalClifford, PauliError, PauliLetter, Phase, Tableau2, TimedPauliWord,
};
use crate::tolerance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeisenbergError {
    #[error("observable word `{0}` is not Hermitian")]
    NonHermitian(String),
    #[error("back-propagation settles into a period-{0} cycle; only period 1 is supported")]
    UnsupportedPeriod(usize),
    #[error("Gaussian overlap is only defined for words on at most two labels (got {0})")]
    UnsupportedOverlap(String),
    #[error("Gaussian width must be positive and shift non-negative (d={d}, tau={tau})")]
    InvalidDistribution { d: f64, tau: f64 },
    #[error("expected {expected} local gates, got {got}")]
    LocalsLength { expected: usize, got: usize },
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Temporal profile of each operator around its nominal time.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum TimeDistribution {
    /// `τ ≫ d`: distinct labels never overlap.
    #[default]
    OrthogonalLimit,
    /// Gaussian of standard deviation `d`, labels separated by `tau`.
    Gaussian { d: f64, tau: f64 },
}

impl TimeDistribution {
    pub fn gaussian(d: f64, tau: f64) -> Result<Self, HeisenbergError> {
        if !(d > 0.0 && d.is_finite() && tau >= 0.0 && tau.is_finite()) {
            return Err(HeisenbergError::InvalidDistribution { d, tau });
        }
        Ok(TimeDistribution::Gaussian { d, tau })
    }

    /// Overlap of two histories `labels` traversals apart.
    pub fn overlap_between(&self, labels: u64) -> f64 {
        match *self {
            TimeDistribution::OrthogonalLimit => 0.0,
            TimeDistribution::Gaussian { d, tau } => gaussian_overlap(d, tau * labels as f64),
        }
    }
}

/// `∫G(u)G(u−s)du / ∫G(u)²du` for a Gaussian of width `d`, i.e. `exp(−s²/4d²)`.
pub fn gaussian_overlap(d: f64, separation: f64) -> f64 {
    (-(separation * separation) / (4.0 * d * d)).exp()
}

/// Normalized overlap of adjacent histories; zero in the orthogonal limit.
pub fn overlap(t: &TimeDistribution) -> f64 {
    t.overlap_between(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockStatus {
    Closed,
    PeriodicTail,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockResult {
    /// Operator continuing toward state preparation.
    pub upper_in: TimedPauliWord,
    /// Lower-rail input at every label; shifted by one it is the upper output.
    pub lower_in: TimedPauliWord,
    pub status: BlockStatus,
    pub labels_resolved: usize,
}

impl BlockResult {
    /// Re-derives the block label by label from the stored words: the gate
    /// must map `(lower_in shifted by one, measured)` onto
    /// `(upper_in, lower_in)` with the phases matching.
    pub fn is_consistent(&self, gate: &Tableau2, measured: &TimedPauliWord) -> bool {
        let fed_back = self.lower_in.shift(1);
        let words = [&self.upper_in, &self.lower_in, &fed_back, measured];
        let spans: Vec<(i64, i64)> = words.iter().filter_map(|w| w.label_span()).collect();
        let lo = spans.iter().map(|s| s.0).min().unwrap_or(0).min(0);
        let hi = spans.iter().map(|s| s.1).max().unwrap_or(0).max(0) + 2;
        let mut phase = measured.phase();
        let mut last_sign = Phase::ONE;
        for k in lo..=hi {
            let (s, u, l) = conj_pair(gate, fed_back.letter_at(k), measured.letter_at(k));
            if u != self.upper_in.letter_at(k) || l != self.lower_in.letter_at(k) {
                return false;
            }
            phase *= s;
            last_sign = s;
        }
        // beyond `hi` every word is constant, so the last step repeats forever
        last_sign == Phase::ONE && self.lower_in.phase() == Phase::ONE && phase == self.upper_in.phase()
    }
}

/// Solves one wormhole block for the given measured word.
pub fn backpropagate_block(gate: &Tableau2, measured: &TimedPauliWord) -> Result<BlockResult, HeisenbergError> {
    if !measured.is_hermitian() {
        return Err(HeisenbergError::NonHermitian(measured.to_string()));
    }
    let (lo, _) = measured.label_span().unwrap_or((0, 0));
    let start = lo.min(0);
    let steady = match (measured.tail(), measured.head().keys().next_back()) {
        (Some(t), _) => t.start,
        (None, Some(&last)) => last + 1,
        (None, None) => start,
    }
    .max(start);

    let mut phase = measured.phase();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut signs = Vec::new();
    let mut seen: HashMap<PauliLetter, i64> = HashMap::new();
    let mut prev_lower = PauliLetter::I;
    let mut k = start;
    let cycle_start = loop {
        if k >= steady {
            if let Some(&first) = seen.get(&prev_lower) {
                break first;
            }
            seen.insert(prev_lower, k);
        }
        let (s, u, l) = conj_pair(gate, prev_lower, measured.letter_at(k));
        signs.push(s);
        upper.push((k, u));
        lower.push((k, l));
        prev_lower = l;
        k += 1;
    };
    let period = (k - cycle_start) as usize;
    let idx = (cycle_start - start) as usize;
    if period != 1 {
        return Err(HeisenbergError::UnsupportedPeriod(period));
    }
    if signs[idx] != Phase::ONE {
        return Err(PauliError::DivergentPhase.into());
    }
    for s in &signs[..idx] {
        phase *= *s;
    }
    let repeat_upper = upper[idx].1;
    let repeat_lower = lower[idx].1;
    let status = if repeat_upper.is_identity() { BlockStatus::Closed } else { BlockStatus::PeriodicTail };
    let upper_in = TimedPauliWord::from_parts(phase, upper[..idx].iter().copied(), Some((cycle_start, repeat_upper)))?;
    let lower_in =
        TimedPauliWord::from_parts(Phase::ONE, lower[..idx].iter().copied(), Some((cycle_start, repeat_lower)))?;
    Ok(BlockResult { upper_in, lower_in, status, labels_resolved: signs.len() })
}

/// Wormhole blocks (each the `Ū` of one interaction) interleaved with local
/// gates: `locals[0]` acts before the first block, `locals[n]` after the last.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergCircuit {
    blocks: Vec<Tableau2>,
    locals: Vec<LocalClifford>,
}

impl HeisenbergCircuit {
    pub fn new(blocks: Vec<Tableau2>, locals: Vec<LocalClifford>) -> Result<Self, HeisenbergError> {
        if locals.len() != blocks.len() + 1 {
            return Err(HeisenbergError::LocalsLength { expected: blocks.len() + 1, got: locals.len() });
        }
        Ok(Self { blocks, locals })
    }

    /// A single block with no local gates.
    pub fn single(block: Tableau2) -> Self {
        Self { blocks: vec![block], locals: vec![LocalClifford::identity(); 2] }
    }

    pub fn blocks(&self) -> &[Tableau2] {
        &self.blocks
    }

    pub fn locals(&self) -> &[LocalClifford] {
        &self.locals
    }
}

/// One block solved during circuit back-propagation.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockTrace {
    pub gate: Tableau2,
    pub measured: TimedPauliWord,
    pub result: BlockResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitTrace {
    /// Word to be evaluated against the prepared state.
    pub word: TimedPauliWord,
    /// Blocks in the order they were solved (measurement side first).
    pub blocks: Vec<BlockTrace>,
}

/// Pulls a single-letter observable back through the whole circuit.
pub fn backpropagate_circuit(
    c: &HeisenbergCircuit,
    observable: PauliLetter,
) -> Result<TimedPauliWord, HeisenbergError> {
    Ok(backpropagate_circuit_traced(c, observable)?.word)
}

pub fn backpropagate_circuit_traced(
    c: &HeisenbergCircuit,
    observable: PauliLetter,
) -> Result<CircuitTrace, HeisenbergError> {
    let last = c.locals.last().expect("locals is never empty");
    let mut word = apply_local(last, &TimedPauliWord::single(observable, 0))?;
    let mut blocks = Vec::with_capacity(c.blocks.len());
    for (gate, local) in c.blocks.iter().zip(&c.locals).rev() {
        let result = backpropagate_block(gate, &word)?;
        let next = apply_local(local, &result.upper_in)?;
        blocks.push(BlockTrace { gate: *gate, measured: word, result });
        word = next;
    }
    Ok(CircuitTrace { word, blocks })
}

/// `⟨0|U_s† l U_s|0⟩` for the prepared input state.
pub fn letter_expectation(l: PauliLetter, p: &PureStateParams) -> f64 {
    let (a, b, t) = (p.alpha(), p.beta(), p.theta());
    match l {
        PauliLetter::I => 1.0,
        PauliLetter::Z => a * a - b * b,
        PauliLetter::X => 2.0 * a * b * (2.0 * t).cos(),
        PauliLetter::Y => -2.0 * a * b * (2.0 * t).sin(),
    }
}

/// An expectation value, or a marker that the infinite product has no limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Expectation {
    Value(f64),
    Singular,
}

impl Expectation {
    pub fn value(self) -> Option<f64> {
        match self {
            Expectation::Value(v) => Some(v),
            Expectation::Singular => None,
        }
    }

    pub fn is_singular(self) -> bool {
        matches!(self, Expectation::Singular)
    }
}

/// Expectation of a word against the prepared state.
pub fn evaluate_expectation(
    w: &TimedPauliWord,
    p: &PureStateParams,
    t: &TimeDistribution,
) -> Result<Expectation, HeisenbergError> {
    let sign = w.phase().sign().ok_or_else(|| HeisenbergError::NonHermitian(w.to_string()))?;
    let head: Vec<(i64, PauliLetter)> = w.head().iter().map(|(&k, &l)| (k, l)).collect();
    let factorized: f64 = head.iter().map(|&(_, l)| letter_expectation(l, p)).product();

    if matches!(t, TimeDistribution::OrthogonalLimit) {
        return Ok(match w.tail() {
            None => Expectation::Value(sign * factorized),
            Some(tail) => {
                let factor = letter_expectation(tail.letter, p);
                if factor.abs() >= 1.0 - tolerance::TAIL_SINGULAR {
                    Expectation::Singular
                } else {
                    // |factor| < 1, so the infinite product vanishes
                    Expectation::Value(0.0)
                }
            }
        });
    }

    match (w.tail(), head.as_slice()) {
        (None, []) | (None, [_]) => Ok(Expectation::Value(sign * factorized)),
        (None, [(k1, l1), (k2, l2)]) => {
            let omega = t.overlap_between(k1.abs_diff(*k2));
            let (prod_phase, prod_letter) = letter_mul(*l1, *l2);
            let coincident = (prod_phase.to_complex() * letter_expectation(prod_letter, p)).re;
            let value = sign * ((1.0 - omega) * factorized + omega * coincident);
            Ok(Expectation::Value(value.clamp(-1.0, 1.0)))
        }
        _ => Err(HeisenbergError::UnsupportedOverlap(w.to_string())),
    }
}

/// All three Bloch components plus the words they came from.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergBloch {
    pub x: Expectation,
    pub y: Expectation,
    pub z: Expectation,
    pub words: [TimedPauliWord; 3],
}

impl HeisenbergBloch {
    pub fn components(&self) -> [Expectation; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_singular(&self) -> bool {
        self.components().iter().any(|c| c.is_singular())
    }

    /// `None` when any component is singular.
    pub fn to_bloch(&self) -> Option<BlochVector> {
        Some(BlochVector::new(self.x.value()?, self.y.value()?, self.z.value()?))
    }
}

pub fn heisenberg_bloch(
    c: &HeisenbergCircuit,
    p: &PureStateParams,
    t: &TimeDistribution,
) -> Result<HeisenbergBloch, HeisenbergError> {
    let mut words = Vec::with_capacity(3);
    let mut values = Vec::with_capacity(3);
    for letter in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z] {
        let w = backpropagate_circuit(c, letter)?;
        values.push(evaluate_expectation(&w, p, t)?);
        words.push(w);
    }
    let words: [TimedPauliWord; 3] = words.try_into().expect("three words");
    Ok(HeisenbergBloch { x: values[0], y: values[1], z: values[2], words })
}
