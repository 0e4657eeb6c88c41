//! Signed Pauli words over integer time labels.
//!
//! A word is a phase times one Pauli letter per label, where label `k` is
//! the qubit's operator `k` wormhole traversals in the past. Letters on
//! different labels commute; same-label products follow the Pauli table.
//! A word may end in an infinite run of a single letter (a tail), which is
//! how the non-terminating back-propagations are represented exactly.

mod letter;
mod notation;
mod tableau;
mod word;

use thiserror::Error;

pub use letter::{letter_mul, PauliLetter, Phase};
pub use tableau::{apply_local, conj_pair, letter_matrix, LocalClifford, PauliPair, Tableau2};
pub use word::{shift, word_mul, Tail, TimedPauliWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("divergent phase: infinite tail accrues a non-unit phase per label")]
    DivergentPhase,
    #[error("images violate the Pauli commutation relations")]
    NotSymplectic,
    #[error("gate is not a Clifford unitary")]
    NotClifford,
    #[error("cannot parse Pauli word `{0}`")]
    Parse(String),
}
