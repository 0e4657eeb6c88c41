use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

/// Dense square complex matrix stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct SquareMatrix<const N: usize>(pub [[C64; N]; N]);

/// Single-qubit operator.
pub type Mat2 = SquareMatrix<2>;
/// Two-qubit operator, first tensor factor is the most significant index.
pub type Mat4 = SquareMatrix<4>;

impl<const N: usize> SquareMatrix<N> {
    pub fn zeros() -> Self {
        Self([[C64::new(0.0, 0.0); N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: [[C64; N]; N]) -> Self {
        Self(rows)
    }

    /// Builds a matrix from real entries.
    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.0[i][j] = C64::new(v, 0.0);
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[j][i] = self.0[i][j].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    /// `self · rho · self†`.
    pub fn conjugate(&self, rho: &Self) -> Self {
        *self * *rho * self.adjoint()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (*self * self.adjoint()).max_abs_diff(&Self::identity()) <= tol
    }

    pub fn apply(&self, v: &[C64; N]) -> [C64; N] {
        let mut out = [C64::new(0.0, 0.0); N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..N).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &[C64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = v[i] * v[j].conj();
            }
        }
        m
    }
}

impl Mat2 {
    /// Eigenvalues of the Hermitian part `(A + A†)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let b = 0.5 * (self.0[0][1] + self.0[1][0].conj());
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        [mean - half_gap, mean + half_gap]
    }

    /// Spectral norm, the largest singular value.
    pub fn operator_norm(&self) -> f64 {
        let gram = self.adjoint() * *self;
        gram.hermitian_eigenvalues()[1].max(0.0).sqrt()
    }
}

impl<const N: usize> Default for SquareMatrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for SquareMatrix<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for SquareMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Mul for SquareMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..N {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl<const N: usize> Add for SquareMatrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] += rhs.0[i][j];
            }
        }
        m
    }
}

impl<const N: usize> Sub for SquareMatrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const N: usize> Neg for SquareMatrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl<const N: usize> fmt::Debug for SquareMatrix<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in &self.0 {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    m
}

/// Traces out the first tensor factor, leaving the second qubit.
pub fn partial_trace_first(m: &Mat4) -> Mat2 {
    let mut out = Mat2::zeros();
    for k in 0..2 {
        for l in 0..2 {
            out.0[k][l] = m.0[k][l] + m.0[2 + k][2 + l];
        }
    }
    out
}

/// Traces out the second tensor factor, leaving the first qubit.
pub fn partial_trace_second(m: &Mat4) -> Mat2 {
    let mut out = Mat2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            out.0[i][j] = m.0[2 * i][2 * j] + m.0[2 * i + 1][2 * j + 1];
        }
    }
    out
}
