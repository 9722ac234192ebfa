//! Quantum network coding on the butterfly repeater network, compared with
//! double entanglement swapping.
//!
//! - [`pauli`]: Pauli algebra and frame propagation over the 14 qubits `A..N`.
//! - [`circuit`]: the two protocol circuits, their dumps, and the trial executor.
//! - [`error_models`]: initial-pair and gate error channels.
//! - [`analytic`]: closed forms, exact enumeration, correlation, thresholds.
//! - [`montecarlo`]: reproducible sampling under gate errors.
//!
//! Probability code is generic over [`Scalar`]; the aliases below fix the
//! common choices.

pub mod analytic;
pub mod circuit;
pub mod error_models;
pub mod montecarlo;
pub mod pauli;
pub mod scalar;
pub mod stabilizer;

pub use scalar::Scalar;

/// Exact rational arithmetic for oracle checks.
pub type Exact = num_rational::BigRational;

pub type Model = error_models::ErrorModel<f64>;
pub type ExactModel = error_models::ErrorModel<Exact>;
pub type Distribution = analytic::JointDistribution<f64>;
pub type ExactDistribution = analytic::JointDistribution<Exact>;
pub type Correlation = analytic::CorrelationTable<f64>;
