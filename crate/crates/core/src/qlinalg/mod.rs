//! Dense complex linear algebra for one- and two-qubit operators.
//!
//! Everything here is a plain value type. The two-qubit ordering convention
//! is `|q1 q2⟩` with the first qubit as the most significant index, so
//! `tensor(a, b)` puts `a` on the first qubit.

mod gates;
mod matrix;
mod state;

use thiserror::Error;

pub use gates::{
    circuit_product, cnot, cz, hadamard, local_pair, pauli_x, pauli_y, pauli_z, phase_s, single_qubit_gate,
    standard_gate, swap, two_qubit_gate, Gate, GateName,
};
pub use matrix::{partial_trace_first, partial_trace_second, tensor, Mat2, Mat4, SquareMatrix};
pub use state::{
    bloch_from_density, density_from_bloch, fidelity, state_prep_unitary, trace_distance, BlochVector, DensityMatrix,
    PureStateParams,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("unknown gate name `{0}`")]
    UnknownGate(String),
    #[error("gate {name} does not act on {expected} qubit(s)")]
    ArityMismatch { name: &'static str, expected: usize },
    #[error("amplitudes alpha={alpha}, beta={beta} must be non-negative with alpha^2 + beta^2 = 1")]
    InvalidAmplitudes { alpha: f64, beta: f64 },
    #[error("alpha^2 = {0} is outside [0, 1]")]
    InvalidAlpha2(f64),
    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    TraceNotOne(f64),
    #[error("matrix has negative eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("Bloch vector norm {0} exceeds 1")]
    OutsideBlochBall(f64),
    #[error("matrix is not unitary")]
    NotUnitary,
}
