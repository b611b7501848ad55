//! Maximal CHSH expectation of two-qudit states under spin-s measurements.
//!
//! The pipeline is state → spin correlation matrix Z (3×3) → singular values
//! → maximum 2√(z² + z̃²) and parameter γ = √(z² + z̃²)/s². Z can be computed
//! three ways ([`Route`]); named state families in [`families`] carry
//! closed-form values and [`oracle`] maximizes over directions directly.

#![allow(clippy::needless_range_loop)]

pub mod chsh;
pub mod correlation;
pub mod error;
pub mod families;
pub mod gellmann;
pub mod matrix;
pub mod oracle;
pub mod random;
pub mod spin;
pub mod state;
pub mod svd3;
pub mod tolerance;

pub use chsh::{
    analyze, chsh_expectation, chsh_expectation_from_correlation, chsh_expectation_trace,
    chsh_operator, chsh_parameter, max_chsh, optimal_settings, violates_lhv, ChshMaximum,
    ChshReport, MeasurementSettings, OptimalSettings,
};
pub use correlation::{
    spin_correlation_by, spin_correlation_from_coefficients, spin_correlation_matrix,
    spin_correlation_via_theorem2, Route, SpinCorrelationMatrix,
};
pub use error::{Error, Result};
pub use gellmann::{
    bloch_vectors_of_spin, gellmann_basis, general_correlation_matrix, zs_via_theorem2,
    BlochVector, GellMannBasis, GellMannKind, GeneralCorrelationMatrix,
};
pub use matrix::{tensor, ComplexMatrix};
pub use oracle::{alternating_ascent, grid_search, verify_theorem1, OracleConfig, OracleResult};
pub use spin::{make_spin_components, spin_projection, SpinOperators, UnitVector3};
pub use state::{pure_state, state_coefficients, QuantumState, StateCoefficients};
pub use tolerance::Tolerances;

pub use num_complex::Complex64;
