//! Dynamical-algebra toolkit: finite-dimensional Lie-algebra irreps,
//! generalized coherent states, the total-fluctuation quantumness measure Δ,
//! CSCO-based degree-of-freedom counting, an integrability classifier, and
//! exact time evolution for a family of collective spin / three-level models.
//!
//! Layout: [`algebra`] builds and validates representations and subalgebra
//! chains; [`coherent`] holds reference/displaced states and Δ; [`models`]
//! builds the Hamiltonians and classifies them; [`dynamics`] evolves states
//! exactly and integrates the classical model on the coherent manifold;
//! [`experiment`] + [`plot`] back the `dynalg` command-line runner.

pub mod algebra;
pub mod coherent;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod models;
pub mod operator;
pub mod plot;

pub use error::{Error, Result};
pub use operator::{OperatorMatrix, StateVector};

/// |‖ψ‖ − 1| allowed when constructing a state, and per evolution sample.
pub const NORM_TOL: f64 = 1e-9;

/// Hermiticity residual allowed at operator construction, relative to the
/// larger of 1 and the operator's max-abs entry.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Residual bound for structure-constant closure, generator orthonormality
/// and Casimir scalarity diagnostics.
pub const CLOSURE_TOL: f64 = 1e-10;

/// Eigenvalues closer than this are treated as one degenerate cluster when
/// counting joint-spectrum refinements.
pub const EIG_CLUSTER_TOL: f64 = 1e-8;

/// Default bound on Δ − Δ_min below which a state counts as coherent.
pub const COHERENCE_TOL: f64 = 1e-8;

/// Relative tolerance (× max(1, ‖H‖∞)) for ‖[H, Q_i]‖∞ in the
/// dynamical-symmetry test.
pub const CHAIN_COMMUTE_TOL: f64 = 1e-9;

/// Relative projection residual below which H counts as linear in the
/// generators.
pub const LINEARITY_TOL: f64 = 1e-9;

/// Allowed relative drift of ⟨H⟩ along a trajectory.
pub const ENERGY_DRIFT_TOL: f64 = 1e-8;
