use std::collections::{BTreeMap, BTreeSet};
use std::ops::Mul;

use super::letter::{letter_mul, PauliLetter, Phase};
use super::PauliError;

/// Infinite run of one letter at every label from `start` upward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Tail {
    pub start: i64,
    pub letter: PauliLetter,
}

/// Phase times a product of Pauli letters, one per integer time label.
///
/// Label `k` is the operator after `k` traversals into the past, so the
/// notation `Z X' Z''` is `Z@0 · X@1 · Z@2`. Letters at distinct labels
/// commute. Words are kept canonical: no stored identities, and head labels
/// stay strictly below the tail start with the run absorbed into the tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TimedPauliWord {
    phase: Phase,
    head: BTreeMap<i64, PauliLetter>,
    tail: Option<Tail>,
}

impl TimedPauliWord {
    /// The empty word with phase `+1`.
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(letter: PauliLetter, label: i64) -> Self {
        let mut w = Self::identity();
        if !letter.is_identity() {
            w.head.insert(label, letter);
        }
        w
    }

    /// `letter` at every label `>= start`.
    pub fn tail_from(letter: PauliLetter, start: i64) -> Self {
        let tail = (!letter.is_identity()).then_some(Tail { start, letter });
        Self { phase: Phase::ONE, head: BTreeMap::new(), tail }
    }

    /// Multiplies the given letters together in order, then by the tail.
    pub fn from_parts(
        phase: Phase,
        letters: impl IntoIterator<Item = (i64, PauliLetter)>,
        tail: Option<(i64, PauliLetter)>,
    ) -> Result<Self, PauliError> {
        let mut w = Self::identity().with_phase(phase);
        for (label, letter) in letters {
            w = word_mul(&w, &Self::single(letter, label))?;
        }
        if let Some((start, letter)) = tail {
            w = word_mul(&w, &Self::tail_from(letter, start))?;
        }
        Ok(w)
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn head(&self) -> &BTreeMap<i64, PauliLetter> {
        &self.head
    }

    pub fn tail(&self) -> Option<Tail> {
        self.tail
    }

    pub fn is_identity(&self) -> bool {
        self.head.is_empty() && self.tail.is_none()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn letter_at(&self, label: i64) -> PauliLetter {
        match self.tail {
            Some(t) if label >= t.start => t.letter,
            _ => self.head.get(&label).copied().unwrap_or_default(),
        }
    }

    /// Number of non-identity labels, `None` for infinite words.
    pub fn weight(&self) -> Option<usize> {
        self.tail.is_none().then_some(self.head.len())
    }

    /// Smallest and largest labels that can hold a non-identity letter,
    /// counting the first tail label. `None` for the empty word.
    pub fn label_span(&self) -> Option<(i64, i64)> {
        let lo = self.head.keys().next().copied().or(self.tail.map(|t| t.start))?;
        let hi = self.tail.map(|t| t.start).or(self.head.keys().next_back().copied())?;
        Some((lo, hi))
    }

    /// Adds `delta` to every label.
    pub fn shift(&self, delta: i64) -> Self {
        Self {
            phase: self.phase,
            head: self.head.iter().map(|(&k, &l)| (k + delta, l)).collect(),
            tail: self.tail.map(|t| Tail { start: t.start + delta, ..t }),
        }
    }

    fn canonicalize(mut self) -> Self {
        self.head.retain(|_, l| !l.is_identity());
        if let Some(mut t) = self.tail {
            debug_assert!(self.head.keys().all(|&k| k < t.start));
            while self.head.get(&(t.start - 1)) == Some(&t.letter) {
                self.head.remove(&(t.start - 1));
                t.start -= 1;
            }
            self.tail = Some(t);
        }
        self
    }
}

/// `a · b`, multiplying letter by letter at each label.
pub fn word_mul(a: &TimedPauliWord, b: &TimedPauliWord) -> Result<TimedPauliWord, PauliError> {
    let mut phase = a.phase * b.phase;
    let starts: Vec<i64> = [a.tail, b.tail].iter().flatten().map(|t| t.start).collect();

    let tail_letter = {
        let (p, l) =
            letter_mul(a.tail.map_or(PauliLetter::I, |t| t.letter), b.tail.map_or(PauliLetter::I, |t| t.letter));
        if p != Phase::ONE {
            return Err(PauliError::DivergentPhase);
        }
        l
    };

    let mut labels: BTreeSet<i64> = a.head.keys().chain(b.head.keys()).copied().collect();
    let mut tail = None;
    if let (Some(&lo), Some(&hi)) = (starts.iter().min(), starts.iter().max()) {
        // head labels past the last tail start must stay explicit
        let end = labels.last().map_or(hi, |&m| hi.max(m + 1));
        labels.extend(lo..end);
        if !tail_letter.is_identity() {
            tail = Some(Tail { start: end, letter: tail_letter });
        }
    }

    let mut head = BTreeMap::new();
    for k in labels {
        let (p, l) = letter_mul(a.letter_at(k), b.letter_at(k));
        phase *= p;
        head.insert(k, l);
    }
    Ok(TimedPauliWord { phase, head, tail }.canonicalize())
}

impl Mul for &TimedPauliWord {
    type Output = Result<TimedPauliWord, PauliError>;
    fn mul(self, rhs: &TimedPauliWord) -> Self::Output {
        word_mul(self, rhs)
    }
}

pub fn shift(w: &TimedPauliWord, delta: i64) -> TimedPauliWord {
    w.shift(delta)
}
