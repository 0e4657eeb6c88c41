use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::matrix::{tensor, Mat2, Mat4};
use super::LinalgError;

/// Names of the fixed gates known to the simulator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GateName {
    /// Controlled sign.
    Cz,
    /// Controlled not, first qubit is the control.
    Cnot,
    Swap,
    H,
    /// Phase gate `diag(1, i)`.
    S,
    I2,
    I4,
    X,
    Y,
    Z,
}

/// A standard gate resolved to its matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    One(Mat2),
    Two(Mat4),
}

impl GateName {
    pub const ALL: [GateName; 10] = [
        GateName::Cz,
        GateName::Cnot,
        GateName::Swap,
        GateName::H,
        GateName::S,
        GateName::I2,
        GateName::I4,
        GateName::X,
        GateName::Y,
        GateName::Z,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GateName::Cz => "CZ",
            GateName::Cnot => "CNOT",
            GateName::Swap => "SWAP",
            GateName::H => "H",
            GateName::S => "S",
            GateName::I2 => "I2",
            GateName::I4 => "I4",
            GateName::X => "X",
            GateName::Y => "Y",
            GateName::Z => "Z",
        }
    }

    pub fn qubits(self) -> usize {
        match self {
            GateName::Cz | GateName::Cnot | GateName::Swap | GateName::I4 => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GateName {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        let name = match upper.as_str() {
            "CZ" | "CS" => GateName::Cz,
            "CNOT" | "CX" => GateName::Cnot,
            "SWAP" => GateName::Swap,
            "H" => GateName::H,
            "S" => GateName::S,
            "I2" | "I" => GateName::I2,
            "I4" => GateName::I4,
            "X" => GateName::X,
            "Y" => GateName::Y,
            "Z" => GateName::Z,
            _ => return Err(LinalgError::UnknownGate(s.trim().to_string())),
        };
        Ok(name)
    }
}

impl TryFrom<String> for GateName {
    type Error = LinalgError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<GateName> for String {
    fn from(g: GateName) -> String {
        g.as_str().to_string()
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_x() -> Mat2 {
    Mat2::from_real([[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y() -> Mat2 {
    Mat2::from_rows([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
}

pub fn pauli_z() -> Mat2 {
    Mat2::from_real([[1.0, 0.0], [0.0, -1.0]])
}

pub fn hadamard() -> Mat2 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Mat2::from_real([[s, s], [s, -s]])
}

pub fn phase_s() -> Mat2 {
    Mat2::from_rows([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]])
}

pub fn cnot() -> Mat4 {
    Mat4::from_real([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0]])
}

pub fn cz() -> Mat4 {
    Mat4::from_real([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, -1.0]])
}

pub fn swap() -> Mat4 {
    Mat4::from_real([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]])
}

/// Looks up a standard gate by name.
pub fn standard_gate(name: GateName) -> Gate {
    match name {
        GateName::Cz => Gate::Two(cz()),
        GateName::Cnot => Gate::Two(cnot()),
        GateName::Swap => Gate::Two(swap()),
        GateName::I4 => Gate::Two(Mat4::identity()),
        GateName::H => Gate::One(hadamard()),
        GateName::S => Gate::One(phase_s()),
        GateName::I2 => Gate::One(Mat2::identity()),
        GateName::X => Gate::One(pauli_x()),
        GateName::Y => Gate::One(pauli_y()),
        GateName::Z => Gate::One(pauli_z()),
    }
}

/// Resolves a single-qubit gate name, rejecting two-qubit names.
pub fn single_qubit_gate(name: GateName) -> Result<Mat2, LinalgError> {
    match standard_gate(name) {
        Gate::One(m) => Ok(m),
        Gate::Two(_) => Err(LinalgError::ArityMismatch { name: name.as_str(), expected: 1 }),
    }
}

/// Resolves a two-qubit gate name, rejecting single-qubit names.
pub fn two_qubit_gate(name: GateName) -> Result<Mat4, LinalgError> {
    match standard_gate(name) {
        Gate::Two(m) => Ok(m),
        Gate::One(_) => Err(LinalgError::ArityMismatch { name: name.as_str(), expected: 2 }),
    }
}

/// Matrix of a gate sequence applied left to right: `[A, B]` means A then B,
/// i.e. the matrix `B·A`.
pub fn circuit_product(gates: &[GateName]) -> Result<Mat4, LinalgError> {
    gates.iter().try_fold(Mat4::identity(), |acc, &g| Ok(two_qubit_gate(g)? * acc))
}

/// Embeds single-qubit gates on each rail.
pub fn local_pair(upper: &Mat2, lower: &Mat2) -> Mat4 {
    tensor(upper, lower)
}
