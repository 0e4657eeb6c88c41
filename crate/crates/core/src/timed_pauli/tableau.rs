use super::letter::{letter_mul, PauliLetter, Phase};
use super::word::{Tail, TimedPauliWord};
use super::PauliError;
use crate::qlinalg::{pauli_x, pauli_y, pauli_z, tensor, Mat2, Mat4};

/// Phase times `upper ⊗ lower`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliPair {
    pub phase: Phase,
    pub upper: PauliLetter,
    pub lower: PauliLetter,
}

impl PauliPair {
    pub const IDENTITY: PauliPair = PauliPair::new(PauliLetter::I, PauliLetter::I);

    pub const fn new(upper: PauliLetter, lower: PauliLetter) -> Self {
        Self { phase: Phase::ONE, upper, lower }
    }

    pub const fn negated(upper: PauliLetter, lower: PauliLetter) -> Self {
        Self { phase: Phase::MINUS_ONE, upper, lower }
    }

    pub fn commutes_with(&self, other: &PauliPair) -> bool {
        let anti =
            usize::from(!self.upper.commutes_with(other.upper)) + usize::from(!self.lower.commutes_with(other.lower));
        anti % 2 == 0
    }

    pub fn to_matrix(&self) -> Mat4 {
        tensor(&letter_matrix(self.upper), &letter_matrix(self.lower)).scale(self.phase.to_complex())
    }
}

impl std::ops::Mul for PauliPair {
    type Output = PauliPair;
    fn mul(self, rhs: PauliPair) -> PauliPair {
        let (pu, upper) = letter_mul(self.upper, rhs.upper);
        let (pl, lower) = letter_mul(self.lower, rhs.lower);
        PauliPair { phase: self.phase * rhs.phase * pu * pl, upper, lower }
    }
}

pub fn letter_matrix(l: PauliLetter) -> Mat2 {
    match l {
        PauliLetter::I => Mat2::identity(),
        PauliLetter::X => pauli_x(),
        PauliLetter::Y => pauli_y(),
        PauliLetter::Z => pauli_z(),
    }
}

/// Expresses `letter` as `phase · X^x · Z^z`.
fn xz_decomposition(letter: PauliLetter) -> (Phase, bool, bool) {
    match letter {
        PauliLetter::I => (Phase::ONE, false, false),
        PauliLetter::X => (Phase::ONE, true, false),
        PauliLetter::Z => (Phase::ONE, false, true),
        // Y = iXZ
        PauliLetter::Y => (Phase::I, true, true),
    }
}

/// Matches `m` against `±P` or `±iP` for a single-qubit Pauli `P`.
fn identify_single(m: &Mat2) -> Option<(Phase, PauliLetter)> {
    for letter in PauliLetter::ALL {
        for k in 0..4 {
            let phase = Phase::from_power(k);
            if m.max_abs_diff(&letter_matrix(letter).scale(phase.to_complex())) < 1e-9 {
                return Some((phase, letter));
            }
        }
    }
    None
}

fn identify_pair(m: &Mat4) -> Option<PauliPair> {
    for upper in PauliLetter::ALL {
        for lower in PauliLetter::ALL {
            for k in 0..4 {
                let candidate = PauliPair { phase: Phase::from_power(k), upper, lower };
                if m.max_abs_diff(&candidate.to_matrix()) < 1e-9 {
                    return Some(candidate);
                }
            }
        }
    }
    None
}

/// A two-qubit Clifford gate given by the Heisenberg images `U† G U` of
/// the generators `X⊗I, Z⊗I, I⊗X, I⊗Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Tableau2 {
    images: [PauliPair; 4],
}

impl Tableau2 {
    const GENERATORS: [PauliPair; 4] = [
        PauliPair::new(PauliLetter::X, PauliLetter::I),
        PauliPair::new(PauliLetter::Z, PauliLetter::I),
        PauliPair::new(PauliLetter::I, PauliLetter::X),
        PauliPair::new(PauliLetter::I, PauliLetter::Z),
    ];

    /// Images in the order `X⊗I, Z⊗I, I⊗X, I⊗Z`. Every image must be
    /// Hermitian and together they must satisfy the Pauli commutation
    /// relations.
    pub fn from_images(images: [PauliPair; 4]) -> Result<Self, PauliError> {
        if images.iter().any(|p| !p.phase.is_real() || (p.upper.is_identity() && p.lower.is_identity())) {
            return Err(PauliError::NotSymplectic);
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                let expect = Self::GENERATORS[i].commutes_with(&Self::GENERATORS[j]);
                if images[i].commutes_with(&images[j]) != expect {
                    return Err(PauliError::NotSymplectic);
                }
            }
        }
        // independence: no nontrivial product of images is the identity
        for mask in 1u8..16 {
            let prod = (0..4).filter(|i| mask & (1 << i) != 0).fold(PauliPair::IDENTITY, |acc, i| acc * images[i]);
            if prod.upper.is_identity() && prod.lower.is_identity() {
                return Err(PauliError::NotSymplectic);
            }
        }
        Ok(Self { images })
    }

    pub fn images(&self) -> [PauliPair; 4] {
        self.images
    }

    pub fn identity() -> Self {
        Self { images: Self::GENERATORS }
    }

    /// Controlled sign.
    pub fn cz() -> Self {
        use PauliLetter::*;
        Self { images: [PauliPair::new(X, Z), PauliPair::new(Z, I), PauliPair::new(Z, X), PauliPair::new(I, Z)] }
    }

    /// Controlled not with the upper qubit as control.
    pub fn cnot() -> Self {
        use PauliLetter::*;
        Self { images: [PauliPair::new(X, X), PauliPair::new(Z, I), PauliPair::new(I, X), PauliPair::new(Z, Z)] }
    }

    pub fn swap() -> Self {
        use PauliLetter::*;
        Self { images: [PauliPair::new(I, X), PauliPair::new(I, Z), PauliPair::new(X, I), PauliPair::new(Z, I)] }
    }

    /// Reads the tableau off a unitary by conjugating each generator.
    pub fn from_unitary(u: &Mat4) -> Result<Self, PauliError> {
        let ud = u.adjoint();
        let mut images = [PauliPair::IDENTITY; 4];
        for (img, g) in images.iter_mut().zip(Self::GENERATORS) {
            *img = identify_pair(&(ud * g.to_matrix() * *u)).ok_or(PauliError::NotClifford)?;
        }
        Self::from_images(images)
    }

    /// Heisenberg image `U† (phase · upper ⊗ lower) U`.
    pub fn conjugate(&self, p: PauliPair) -> PauliPair {
        let (pu, ux, uz) = xz_decomposition(p.upper);
        let (pl, lx, lz) = xz_decomposition(p.lower);
        let factors = [ux, uz, lx, lz];
        let mut out = PauliPair { phase: p.phase * pu * pl, ..PauliPair::IDENTITY };
        for (used, img) in factors.into_iter().zip(self.images) {
            if used {
                out = out * img;
            }
        }
        out
    }

    /// The tableau of `U†`.
    pub fn inverse(&self) -> Self {
        let mut images = [PauliPair::IDENTITY; 4];
        for (img, g) in images.iter_mut().zip(Self::GENERATORS) {
            *img = self.preimage(g);
        }
        Self { images }
    }

    fn preimage(&self, target: PauliPair) -> PauliPair {
        for upper in PauliLetter::ALL {
            for lower in PauliLetter::ALL {
                let img = self.conjugate(PauliPair::new(upper, lower));
                if img.upper == target.upper && img.lower == target.lower {
                    let fix = Phase::from_power(target.phase.power() as i32 - img.phase.power() as i32);
                    return PauliPair { phase: fix, upper, lower };
                }
            }
        }
        unreachable!("a valid tableau is a bijection on Pauli pairs")
    }

    /// Tableau of "apply `self`, then `next`".
    pub fn then(&self, next: &Tableau2) -> Self {
        // U_total = U_next U_self, so U_total† G U_total = U_self† (U_next† G U_next) U_self
        let mut images = [PauliPair::IDENTITY; 4];
        for (img, g) in images.iter_mut().zip(Self::GENERATORS) {
            *img = self.conjugate(next.conjugate(g));
        }
        Self { images }
    }
}

/// Conjugates `upper ⊗ lower` through the gate, returning the real sign and
/// the image letters.
pub fn conj_pair(t: &Tableau2, upper: PauliLetter, lower: PauliLetter) -> (Phase, PauliLetter, PauliLetter) {
    let out = t.conjugate(PauliPair::new(upper, lower));
    debug_assert!(out.phase.is_real());
    (out.phase, out.upper, out.lower)
}

/// A single-qubit Clifford given by the Heisenberg images of `X` and `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalClifford {
    x_image: (Phase, PauliLetter),
    z_image: (Phase, PauliLetter),
}

impl LocalClifford {
    pub fn from_images(x_image: (Phase, PauliLetter), z_image: (Phase, PauliLetter)) -> Result<Self, PauliError> {
        let valid = |(p, l): (Phase, PauliLetter)| p.is_real() && !l.is_identity();
        if !valid(x_image) || !valid(z_image) || x_image.1.commutes_with(z_image.1) {
            return Err(PauliError::NotSymplectic);
        }
        Ok(Self { x_image, z_image })
    }

    pub fn identity() -> Self {
        Self { x_image: (Phase::ONE, PauliLetter::X), z_image: (Phase::ONE, PauliLetter::Z) }
    }

    /// `X ↔ Z`, `Y → −Y`.
    pub fn hadamard() -> Self {
        Self { x_image: (Phase::ONE, PauliLetter::Z), z_image: (Phase::ONE, PauliLetter::X) }
    }

    pub fn from_unitary(u: &Mat2) -> Result<Self, PauliError> {
        let ud = u.adjoint();
        let x = identify_single(&(ud * pauli_x() * *u)).ok_or(PauliError::NotClifford)?;
        let z = identify_single(&(ud * pauli_z() * *u)).ok_or(PauliError::NotClifford)?;
        Self::from_images(x, z)
    }

    /// Heisenberg image `U† l U` as a sign and a letter.
    pub fn conj_letter(&self, l: PauliLetter) -> (Phase, PauliLetter) {
        match l {
            PauliLetter::I => (Phase::ONE, PauliLetter::I),
            PauliLetter::X => self.x_image,
            PauliLetter::Z => self.z_image,
            PauliLetter::Y => {
                let (p, letter) = letter_mul(self.x_image.1, self.z_image.1);
                (Phase::I * self.x_image.0 * self.z_image.0 * p, letter)
            }
        }
    }
}

/// Applies a local Clifford letter by letter at every label.
pub fn apply_local(c: &LocalClifford, w: &TimedPauliWord) -> Result<TimedPauliWord, PauliError> {
    let mut phase = w.phase();
    let mut letters = Vec::with_capacity(w.head().len());
    for (&k, &l) in w.head() {
        let (p, image) = c.conj_letter(l);
        phase *= p;
        letters.push((k, image));
    }
    let tail = match w.tail() {
        Some(Tail { start, letter }) => {
            let (p, image) = c.conj_letter(letter);
            if p != Phase::ONE {
                return Err(PauliError::DivergentPhase);
            }
            Some((start, image))
        }
        None => None,
    };
    TimedPauliWord::from_parts(phase, letters, tail)
}
