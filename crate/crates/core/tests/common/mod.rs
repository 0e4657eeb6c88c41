#![allow(dead_code)]

use ctcsim::qlinalg::{density_from_bloch, BlochVector, DensityMatrix, GateName, Mat2, Mat4, PureStateParams};
use ctcsim::scenario::{GateExpr, GateFactor};
use nalgebra::{Complex, DMatrix};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::Rng;

pub fn prep() -> impl Strategy<Value = PureStateParams> {
    (0.0..=1.0f64, 0.0..std::f64::consts::PI).prop_map(|(a2, t)| PureStateParams::from_alpha2(a2, t).unwrap())
}

/// Preparations kept away from `α = β`.
pub fn regular_prep() -> impl Strategy<Value = PureStateParams> {
    prep().prop_filter("near alpha = beta", |p| (p.alpha() - p.beta()).abs() > 1e-3)
}

pub fn random_prep(rng: &mut impl Rng) -> PureStateParams {
    PureStateParams::from_alpha2(rng.random_range(0.0..=1.0), rng.random_range(0.0..std::f64::consts::PI)).unwrap()
}

pub fn random_regular_prep(rng: &mut impl Rng) -> PureStateParams {
    loop {
        let p = random_prep(rng);
        if (p.alpha() - p.beta()).abs() > 1e-3 {
            return p;
        }
    }
}

pub fn random_bloch(rng: &mut impl Rng) -> BlochVector {
    loop {
        let v = [0; 3].map(|_| rng.random_range(-1.0..=1.0));
        let r = BlochVector::new(v[0], v[1], v[2]);
        if r.norm() <= 1.0 {
            return r;
        }
    }
}

pub fn random_density(rng: &mut impl Rng) -> DensityMatrix {
    density_from_bloch(&random_bloch(rng)).unwrap()
}

pub fn density() -> impl Strategy<Value = DensityMatrix> {
    (-1.0..=1.0f64, -1.0..=1.0f64, -1.0..=1.0f64)
        .prop_filter("outside the ball", |(x, y, z)| x * x + y * y + z * z <= 1.0)
        .prop_map(|(x, y, z)| density_from_bloch(&BlochVector::new(x, y, z)).unwrap())
}

/// Unitary from the QR factorization of a random complex matrix.
pub fn random_unitary4(rng: &mut impl Rng) -> Mat4 {
    let a = DMatrix::from_fn(4, 4, |_, _| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let q = a.qr().q();
    let mut m = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = C64::new(q[(i, j)].re, q[(i, j)].im);
        }
    }
    m
}

pub fn mat2(rows: [[C64; 2]; 2]) -> Mat2 {
    Mat2::from_rows(rows)
}

/// Generators for random two-qubit Clifford circuits.
pub const CLIFFORD_FACTORS: [GateFactor; 7] = [
    GateFactor::Two(GateName::Cnot),
    GateFactor::Two(GateName::Cz),
    GateFactor::Two(GateName::Swap),
    GateFactor::Pair(GateName::H, GateName::I2),
    GateFactor::Pair(GateName::I2, GateName::H),
    GateFactor::Pair(GateName::S, GateName::I2),
    GateFactor::Pair(GateName::I2, GateName::S),
];

pub fn clifford_expr() -> impl Strategy<Value = GateExpr> {
    prop::collection::vec(prop::sample::select(CLIFFORD_FACTORS.to_vec()), 1..12).prop_map(GateExpr::new)
}
