//! Explainability metrics for batch surrogate optimization.
//!
//! The crate provides:
//!
//! * the metric suite itself — per-point sampling metrics (coordinate
//!   coverage, distance from prior evaluations, Pareto hypervolume
//!   contributions), batch metrics (KDE entropy, kernel-determinant
//!   diversity, batch distance, hypervolume), process metrics
//!   (solution-space partitioning, convergence rate, stability) and
//!   feature-importance metrics (permutation and Monte-Carlo Shapley);
//! * reference models the metrics can explain: a squared-exponential
//!   Gaussian process, a CART regression tree and a distance-based
//!   exploration score;
//! * synthetic benchmark objectives and candidate-set batch-selection
//!   strategies forming a desk-scale instrumented optimization harness;
//! * JSON-lines trace persistence, CSV ingestion for post-hoc analysis of
//!   external optimizer logs, and multi-run aggregation.
//!
//! The numeric core is generic over the scalar type ([`Scalar`], `f32` or
//! `f64`); the harness, traces and CLI use `f64`. Concrete `f64` aliases
//! for the common types live at the crate root.

pub mod benchmarks;
pub mod domain;
pub mod error;
pub mod metrics;
pub mod surrogate;

mod linalg;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Scalar type used by the harness, trace files and CLI.
pub type Real = f64;

/// [`domain::Bounds`] over the default scalar.
pub type Bounds = domain::Bounds<Real>;
/// [`domain::EvaluatedSet`] over the default scalar.
pub type EvaluatedSet = domain::EvaluatedSet<Real>;
/// [`domain::Batch`] over the default scalar.
pub type Batch = domain::Batch<Real>;
/// [`domain::CandidateSet`] over the default scalar.
pub type CandidateSet = domain::CandidateSet<Real>;
/// [`domain::ExploreExploitScore`] over the default scalar.
pub type ExploreExploitScore = domain::ExploreExploitScore<Real>;
/// [`surrogate::Partition`] over the default scalar.
pub type Partition = surrogate::Partition<Real>;
/// [`surrogate::GpModel`] over the default scalar.
pub type GpModel = surrogate::GpModel<Real>;
/// [`surrogate::TreeModel`] over the default scalar.
pub type TreeModel = surrogate::TreeModel<Real>;
/// [`benchmarks::Problem`] over the default scalar.
pub type Problem = benchmarks::Problem<Real>;

pub use domain::RngSeed;
