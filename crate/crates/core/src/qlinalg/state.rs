use std::ops::Deref;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::gates::{pauli_x, pauli_y, pauli_z};
use super::matrix::Mat2;
use super::LinalgError;
use crate::tolerance;

/// Input qubit `α e^{iθ}|0⟩ + β e^{−iθ}|1⟩` with real non-negative amplitudes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureStateParams {
    alpha: f64,
    beta: f64,
    /// Kept as given so that `α²` round-trips exactly.
    alpha2: f64,
    theta: f64,
}

impl PureStateParams {
    pub fn new(alpha: f64, beta: f64, theta: f64) -> Result<Self, LinalgError> {
        if !(alpha.is_finite() && beta.is_finite() && theta.is_finite()) {
            return Err(LinalgError::InvalidAmplitudes { alpha, beta });
        }
        if alpha < 0.0 || beta < 0.0 {
            return Err(LinalgError::InvalidAmplitudes { alpha, beta });
        }
        if (alpha * alpha + beta * beta - 1.0).abs() > tolerance::STRUCTURAL {
            return Err(LinalgError::InvalidAmplitudes { alpha, beta });
        }
        Ok(Self { alpha, beta, alpha2: alpha * alpha, theta })
    }

    /// Builds the state from the population `α²` of `|0⟩`.
    pub fn from_alpha2(alpha2: f64, theta: f64) -> Result<Self, LinalgError> {
        if !(0.0..=1.0).contains(&alpha2) || !theta.is_finite() {
            return Err(LinalgError::InvalidAlpha2(alpha2));
        }
        Ok(Self { alpha: alpha2.sqrt(), beta: (1.0 - alpha2).sqrt(), alpha2, theta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    /// Schrödinger amplitudes `(α e^{iθ}, β e^{−iθ})`.
    pub fn amplitudes(&self) -> [C64; 2] {
        [C64::from_polar(self.alpha, self.theta), C64::from_polar(self.beta, -self.theta)]
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix(Mat2::outer(&self.amplitudes()))
    }

    pub fn bloch(&self) -> BlochVector {
        let (a, b, t) = (self.alpha, self.beta, self.theta);
        BlochVector { rx: 2.0 * a * b * (2.0 * t).cos(), ry: -2.0 * a * b * (2.0 * t).sin(), rz: a * a - b * b }
    }
}

/// Preparation unitary taking `|0⟩` to the input state.
///
/// Equals `e^{iθZ}(αI − iβY)`; the `−` sign makes `U_s|0⟩` exactly
/// `α e^{iθ}|0⟩ + β e^{−iθ}|1⟩` with the standard `Y`.
pub fn state_prep_unitary(p: &PureStateParams) -> Mat2 {
    let phase = Mat2::from_rows([
        [C64::from_polar(1.0, p.theta), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::from_polar(1.0, -p.theta)],
    ]);
    let rotation = Mat2::identity().scale(C64::new(p.alpha, 0.0)) - pauli_y().scale(C64::new(0.0, p.beta));
    phase * rotation
}

/// 2×2 Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(Mat2);

impl DensityMatrix {
    /// Validates `m` against the structural tolerance.
    pub fn new(m: Mat2) -> Result<Self, LinalgError> {
        Self::with_tolerance(m, tolerance::STRUCTURAL)
    }

    pub fn with_tolerance(m: Mat2, tol: f64) -> Result<Self, LinalgError> {
        let asym = m.max_abs_diff(&m.adjoint());
        if asym > tol {
            return Err(LinalgError::NotHermitian(asym));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return Err(LinalgError::TraceNotOne(tr.re));
        }
        let min_eig = m.hermitian_eigenvalues()[0];
        if min_eig < -tol {
            return Err(LinalgError::NotPositive(min_eig));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix produced by a trace-preserving positive map.
    pub(crate) fn trusted(m: Mat2) -> Self {
        debug_assert!(Self::with_tolerance(m, 1e-9).is_ok(), "{m:?}");
        Self(m)
    }

    pub fn maximally_mixed() -> Self {
        Self(Mat2::identity().scale(C64::new(0.5, 0.0)))
    }

    /// `|0⟩⟨0|` or `|1⟩⟨1|`.
    pub fn basis(bit: bool) -> Self {
        let mut m = Mat2::zeros();
        let i = usize::from(bit);
        m[(i, i)] = C64::new(1.0, 0.0);
        Self(m)
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        self.0.hermitian_eigenvalues()
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues().iter().filter(|&&l| l > 0.0).map(|&l| -l * l.log2()).sum()
    }

    /// `U ρ U†`, still a density matrix when `U` is unitary.
    pub fn evolve(&self, u: &Mat2) -> Result<Self, LinalgError> {
        Self::with_tolerance(u.conjugate(&self.0), 1e-10)
    }
}

impl Deref for DensityMatrix {
    type Target = Mat2;
    fn deref(&self) -> &Mat2 {
        &self.0
    }
}

/// Bloch vector `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
}

impl BlochVector {
    pub fn new(rx: f64, ry: f64, rz: f64) -> Self {
        Self { rx, ry, rz }
    }

    pub fn norm(&self) -> f64 {
        (self.rx * self.rx + self.ry * self.ry + self.rz * self.rz).sqrt()
    }

    pub fn components(&self) -> [f64; 3] {
        [self.rx, self.ry, self.rz]
    }

    pub fn max_component_delta(&self, other: &BlochVector) -> f64 {
        self.components().iter().zip(other.components()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub fn bloch_from_density(rho: &DensityMatrix) -> BlochVector {
    let m = rho.matrix();
    BlochVector { rx: (pauli_x() * *m).trace().re, ry: (pauli_y() * *m).trace().re, rz: (pauli_z() * *m).trace().re }
}

pub fn density_from_bloch(r: &BlochVector) -> Result<DensityMatrix, LinalgError> {
    let n = r.norm();
    if !n.is_finite() || n > 1.0 + tolerance::BLOCH_RADIUS {
        return Err(LinalgError::OutsideBlochBall(n));
    }
    let half = C64::new(0.5, 0.0);
    let m = (Mat2::identity()
        + pauli_x().scale(C64::new(r.rx, 0.0))
        + pauli_y().scale(C64::new(r.ry, 0.0))
        + pauli_z().scale(C64::new(r.rz, 0.0)))
    .scale(half);
    // radii in (1, 1 + slack] give eigenvalues down to -slack/2
    DensityMatrix::with_tolerance(m, tolerance::BLOCH_RADIUS)
}

/// `½ Σ |λ_i(ρ − σ)|`
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let diff = *rho.matrix() - *sigma.matrix();
    let ev = diff.hermitian_eigenvalues();
    (0.5 * (ev[0].abs() + ev[1].abs())).clamp(0.0, 1.0)
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`, via the qubit identity
/// `Tr(ρσ) + 2√(det ρ · det σ)`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let overlap = (*rho.matrix() * *sigma.matrix()).trace().re;
    let det = |m: &Mat2| (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re.max(0.0);
    (overlap + 2.0 * (det(rho.matrix()) * det(sigma.matrix())).sqrt()).clamp(0.0, 1.0)
}
