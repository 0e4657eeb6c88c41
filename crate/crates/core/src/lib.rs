//! A qubit scattering off a closed time-like curve, solved two ways.
//!
//! The density-matrix engine ([`db_model`]) imposes the self-consistency
//! condition on the qubit inside the loop and traces it out. The Heisenberg
//! engine ([`heisenberg`]) pulls measured observables back through the
//! unfolded circuit as signed Pauli words over time labels
//! ([`timed_pauli`]). [`scenario`] describes circuits once for both engines
//! and compares their answers.
//!
//! ```
//! use ctcsim::db_model::SolveMethod;
//! use ctcsim::scenario::{compare, named_scenario};
//!
//! let spec = named_scenario("chained_cnot_hadamard")?;
//! let report = compare(&spec, &spec.prep, SolveMethod::Eigen);
//! assert!(report.flags.diverge);
//! # Ok::<(), ctcsim::scenario::ScenarioError>(())
//! ```

pub mod db_model;
pub mod heisenberg;
pub mod qlinalg;
pub mod scenario;
pub mod timed_pauli;
pub mod tolerance;
