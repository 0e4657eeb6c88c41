//! Numerical tolerances shared by every engine.

/// Structural checks: unitarity, Hermiticity, unit trace, normalization.
pub const STRUCTURAL: f64 = 1e-12;

/// Fixed-point residual required of the density-matrix solver.
pub const SOLVER: f64 = 1e-10;

/// Slack on the Bloch-ball radius before a vector is rejected.
pub const BLOCH_RADIUS: f64 = 1e-9;

/// Two engines agree when every Bloch component differs by less than this.
pub const COMPARISON: f64 = 1e-9;

/// Iterate and eigen solutions must match within this unless degenerate.
pub const SOLVER_AGREEMENT: f64 = 1e-8;

/// Singular values of `I - M` below this mark a degenerate fixed-point set.
pub const RANK: f64 = 1e-9;

/// A tail factor this close to `±1` has no limiting product.
pub const TAIL_SINGULAR: f64 = 1e-12;
