//! Density-matrix treatment of a qubit scattering off a closed time-like curve.
//!
//! Qubit 1 (the input) meets qubit 2 (trapped on the loop) through a
//! two-qubit unitary `U`. The loop qubit must be self-consistent,
//! `ρ = Tr₁[U(ρ_in ⊗ ρ)U†]`, and the scattered state is
//! `ρ_out = Tr₂[U(ρ_in ⊗ ρ)U†]`.
//!
//! The consistency map is affine in the Bloch vector of `ρ`, so it is solved
//! two ways: plain iteration from `I/2`, and a direct linear solve of
//! `(I − M) r = b` on the Bloch coordinates. When the solution set is more
//! than a point, the minimum-norm solution is returned; it is the
//! maximum-entropy fixed point and the result is flagged degenerate.

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

use crate::qlinalg::{
    bloch_from_density, density_from_bloch, partial_trace_first, partial_trace_second, tensor, BlochVector,
    DensityMatrix, LinalgError, Mat2, Mat4, PureStateParams,
};
use crate::tolerance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DbError {
    #[error("interaction is not unitary")]
    NotUnitary,
    #[error("fixed-point iteration did not converge after {iterations} steps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("fixed-point residual {0:e} exceeds solver tolerance")]
    ResidualTooLarge(f64),
    #[error("iterate and eigen solutions disagree by {0:e}")]
    SolverDisagreement(f64),
    #[error("expected {expected} local gates, got {got}")]
    LocalsLength { expected: usize, got: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One wormhole interaction, the `U` acting on (input, loop) qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DbBlock {
    interaction: Mat4,
}

impl DbBlock {
    pub fn new(interaction: Mat4) -> Result<Self, DbError> {
        if !interaction.is_unitary(tolerance::STRUCTURAL) {
            return Err(DbError::NotUnitary);
        }
        Ok(Self { interaction })
    }

    pub fn interaction(&self) -> &Mat4 {
        &self.interaction
    }

    fn joint(&self, rho_in: &DensityMatrix, rho: &DensityMatrix) -> Mat4 {
        self.interaction.conjugate(&tensor(rho_in, rho))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SolveMethod {
    Iterate,
    #[default]
    Eigen,
    Both,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub max_iters: usize,
    /// Iteration stops once successive iterates differ by less than this.
    pub step_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iters: 100_000, step_tol: 1e-14 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DbSolution {
    pub fixed_point: DensityMatrix,
    pub output: DensityMatrix,
    pub iterations: usize,
    /// Spectral norm of `ρ − ctc_map(ρ)`.
    pub residual: f64,
    /// Dimension of the affine fixed-point set (0 for a unique solution).
    pub free_dimensions: usize,
    pub degenerate: bool,
}

/// `Tr₁[U(ρ_in ⊗ ρ)U†]`, the state fed back around the loop.
pub fn ctc_map(block: &DbBlock, rho_in: &DensityMatrix, rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::trusted(partial_trace_first(&block.joint(rho_in, rho)))
}

/// `Tr₂[U(ρ_in ⊗ ρ)U†]`, the scattered input qubit.
pub fn db_output(block: &DbBlock, rho_in: &DensityMatrix, rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::trusted(partial_trace_second(&block.joint(rho_in, rho)))
}

fn residual(block: &DbBlock, rho_in: &DensityMatrix, rho: &DensityMatrix) -> f64 {
    (*rho.matrix() - *ctc_map(block, rho_in, rho).matrix()).operator_norm()
}

/// Affine action `r ↦ M r + b` of the consistency map on Bloch vectors.
fn affine_bloch_map(block: &DbBlock, rho_in: &DensityMatrix) -> (Matrix3<f64>, Vector3<f64>) {
    let image = |r: BlochVector| {
        // unit and zero vectors are always valid states
        let rho = density_from_bloch(&r).expect("unit Bloch vector");
        let out = bloch_from_density(&ctc_map(block, rho_in, &rho));
        Vector3::new(out.rx, out.ry, out.rz)
    };
    let b = image(BlochVector::default());
    let axes = [BlochVector::new(1.0, 0.0, 0.0), BlochVector::new(0.0, 1.0, 0.0), BlochVector::new(0.0, 0.0, 1.0)];
    let mut m = Matrix3::zeros();
    for (j, axis) in axes.into_iter().enumerate() {
        m.set_column(j, &(image(axis) - b));
    }
    (m, b)
}

struct LinearFixedPoint {
    rho: DensityMatrix,
    free_dimensions: usize,
}

fn solve_linear(block: &DbBlock, rho_in: &DensityMatrix) -> Result<LinearFixedPoint, DbError> {
    let (m, b) = affine_bloch_map(block, rho_in);
    let a = Matrix3::identity() - m;
    let svd = a.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let scale = svd.singular_values.max().max(1.0);
    let mut free = 0;
    let mut r = Vector3::zeros();
    let ub = u.transpose() * b;
    for i in 0..3 {
        let s = svd.singular_values[i];
        if s <= tolerance::RANK * scale {
            free += 1;
        } else {
            r += v_t.row(i).transpose() * (ub[i] / s);
        }
    }
    let mut bloch = BlochVector::new(r[0], r[1], r[2]);
    // round-off can leave a pure fixed point a hair outside the ball
    let n = bloch.norm();
    if n > 1.0 && n <= 1.0 + tolerance::BLOCH_RADIUS {
        bloch = BlochVector::new(bloch.rx / n, bloch.ry / n, bloch.rz / n);
    }
    Ok(LinearFixedPoint { rho: density_from_bloch(&bloch)?, free_dimensions: free })
}

fn solve_iterate(
    block: &DbBlock,
    rho_in: &DensityMatrix,
    opts: &SolverOptions,
) -> Result<(DensityMatrix, usize), DbError> {
    let mut rho = DensityMatrix::maximally_mixed();
    for it in 1..=opts.max_iters {
        let next = ctc_map(block, rho_in, &rho);
        let step = (*next.matrix() - *rho.matrix()).operator_norm();
        rho = next;
        if step < opts.step_tol {
            return Ok((rho, it));
        }
    }
    Err(DbError::NonConvergence { iterations: opts.max_iters, residual: residual(block, rho_in, &rho) })
}

/// Solves the consistency condition and evaluates the scattered output.
pub fn solve_fixed_point(block: &DbBlock, rho_in: &DensityMatrix, method: SolveMethod) -> Result<DbSolution, DbError> {
    solve_fixed_point_with(block, rho_in, method, &SolverOptions::default())
}

pub fn solve_fixed_point_with(
    block: &DbBlock,
    rho_in: &DensityMatrix,
    method: SolveMethod,
    opts: &SolverOptions,
) -> Result<DbSolution, DbError> {
    // the linear solve also supplies the degeneracy count for every method
    let linear = solve_linear(block, rho_in)?;
    let degenerate = linear.free_dimensions > 0;
    let (fixed_point, iterations) = match method {
        SolveMethod::Eigen => (linear.rho, 0),
        SolveMethod::Iterate => solve_iterate(block, rho_in, opts)?,
        SolveMethod::Both => {
            let (iterated, n) = solve_iterate(block, rho_in, opts)?;
            let delta = iterated.matrix().max_abs_diff(linear.rho.matrix());
            if !degenerate && delta > tolerance::SOLVER_AGREEMENT {
                return Err(DbError::SolverDisagreement(delta));
            }
            (linear.rho, n)
        }
    };
    let res = residual(block, rho_in, &fixed_point);
    if res >= tolerance::SOLVER {
        return Err(DbError::ResidualTooLarge(res));
    }
    Ok(DbSolution {
        fixed_point,
        output: db_output(block, rho_in, &fixed_point),
        iterations,
        residual: res,
        free_dimensions: linear.free_dimensions,
        degenerate,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainOutcome {
    pub output: DensityMatrix,
    pub solutions: Vec<DbSolution>,
}

impl ChainOutcome {
    pub fn degenerate(&self) -> bool {
        self.solutions.iter().any(|s| s.degenerate)
    }
}

/// Threads a prepared pure state through wormhole blocks separated by local
/// gates. `locals` has one more entry than `blocks`: before, between, after.
pub fn run_chain(
    blocks: &[DbBlock],
    locals: &[Mat2],
    p: &PureStateParams,
    method: SolveMethod,
) -> Result<ChainOutcome, DbError> {
    run_chain_from(blocks, locals, &p.density(), method)
}

pub fn run_chain_from(
    blocks: &[DbBlock],
    locals: &[Mat2],
    rho_in: &DensityMatrix,
    method: SolveMethod,
) -> Result<ChainOutcome, DbError> {
    if locals.len() != blocks.len() + 1 {
        return Err(DbError::LocalsLength { expected: blocks.len() + 1, got: locals.len() });
    }
    let mut rho = *rho_in;
    let mut solutions = Vec::with_capacity(blocks.len());
    for (block, local) in blocks.iter().zip(locals) {
        rho = rho.evolve(local)?;
        let sol = solve_fixed_point(block, &rho, method)?;
        rho = sol.output;
        solutions.push(sol);
    }
    let trailing = locals.last().expect("locals is non-empty");
    Ok(ChainOutcome { output: rho.evolve(trailing)?, solutions })
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64 as C64;

    use super::*;
    use crate::qlinalg::{circuit_product, hadamard, GateName};

    fn block(gates: &[GateName]) -> DbBlock {
        DbBlock::new(circuit_product(gates).unwrap()).unwrap()
    }

    fn cnot_swap() -> DbBlock {
        block(&[GateName::Cnot, GateName::Swap])
    }

    fn cz_swap() -> DbBlock {
        block(&[GateName::Cz, GateName::Swap])
    }

    #[test]
    fn identity_channel_returns_loop_state() {
        let id = DbBlock::new(Mat4::identity()).unwrap();
        let rho_in = PureStateParams::from_alpha2(0.3, 0.4).unwrap().density();
        let rho = PureStateParams::from_alpha2(0.8, -1.1).unwrap().density();
        let out = ctc_map(&id, &rho_in, &rho);
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn ground_state_is_fixed_for_cz() {
        let rho_in = PureStateParams::from_alpha2(1.0, 0.0).unwrap().density();
        let zero = DensityMatrix::basis(false);
        let out = ctc_map(&cz_swap(), &rho_in, &zero);
        assert!(out.matrix().max_abs_diff(zero.matrix()) < 1e-15);
    }

    #[test]
    fn identity_interaction_is_degenerate_with_mixed_pick() {
        let id = DbBlock::new(Mat4::identity()).unwrap();
        let rho_in = PureStateParams::from_alpha2(0.6, 0.2).unwrap().density();
        let sol = solve_fixed_point(&id, &rho_in, SolveMethod::Both).unwrap();
        assert!(sol.degenerate);
        assert_eq!(sol.free_dimensions, 3);
        assert!(sol.fixed_point.matrix().max_abs_diff(DensityMatrix::maximally_mixed().matrix()) < 1e-15);
    }

    #[test]
    fn cnot_output_at_three_quarters() {
        let p = PureStateParams::from_alpha2(0.75, 0.0).unwrap();
        let sol = solve_fixed_point(&cnot_swap(), &p.density(), SolveMethod::Both).unwrap();
        let expected = Mat2::from_real([[0.625, 0.0], [0.0, 0.375]]);
        assert!(sol.output.matrix().max_abs_diff(&expected) < 1e-12);
        assert!(!sol.degenerate);
    }

    #[test]
    fn cnot_singular_point_is_flagged() {
        let p = PureStateParams::from_alpha2(0.5, 0.0).unwrap();
        let sol = solve_fixed_point(&cnot_swap(), &p.density(), SolveMethod::Eigen).unwrap();
        assert!(sol.degenerate);
        assert_eq!(sol.free_dimensions, 1);
    }

    #[test]
    fn non_unitary_block_rejected() {
        let m = Mat4::identity().scale(C64::new(2.0, 0.0));
        assert_eq!(DbBlock::new(m), Err(DbError::NotUnitary));
    }

    #[test]
    fn chain_needs_one_more_local_than_blocks() {
        let p = PureStateParams::from_alpha2(0.5, 0.0).unwrap();
        let err = run_chain(&[cnot_swap()], &[Mat2::identity()], &p, SolveMethod::Eigen).unwrap_err();
        assert_eq!(err, DbError::LocalsLength { expected: 2, got: 1 });
    }

    #[test]
    fn single_identity_block_leaves_input() {
        let p = PureStateParams::from_alpha2(0.3, 0.9).unwrap();
        let id = DbBlock::new(Mat4::identity()).unwrap();
        let out = run_chain(&[id], &[Mat2::identity(), Mat2::identity()], &p, SolveMethod::Eigen).unwrap();
        assert!(out.output.matrix().max_abs_diff(p.density().matrix()) < 1e-15);
    }

    #[test]
    fn single_block_chain_matches_direct_solve() {
        let p = PureStateParams::from_alpha2(0.7, 0.3).unwrap();
        let chain = run_chain(&[cnot_swap()], &[Mat2::identity(), Mat2::identity()], &p, SolveMethod::Both).unwrap();
        let direct = solve_fixed_point(&cnot_swap(), &p.density(), SolveMethod::Both).unwrap();
        assert!(chain.output.matrix().max_abs_diff(direct.output.matrix()) < 1e-15);
    }

    #[test]
    fn hadamard_chain_depolarizes() {
        let p = PureStateParams::from_alpha2(0.75, 0.0).unwrap();
        let h = hadamard();
        let out = run_chain(&[cnot_swap(), cnot_swap()], &[Mat2::identity(), h, h], &p, SolveMethod::Both).unwrap();
        let mixed = DensityMatrix::maximally_mixed();
        assert!(out.output.matrix().max_abs_diff(mixed.matrix()) < 1e-12);
    }

    #[test]
    fn iteration_budget_is_enforced() {
        let p = PureStateParams::from_alpha2(0.49, 0.0).unwrap();
        let opts = SolverOptions { max_iters: 1, ..SolverOptions::default() };
        let err = solve_fixed_point_with(&cnot_swap(), &p.density(), SolveMethod::Iterate, &opts).unwrap_err();
        assert!(matches!(err, DbError::NonConvergence { iterations: 1, .. }));
    }
}
