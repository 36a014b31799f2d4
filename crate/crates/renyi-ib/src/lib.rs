//! Relevance vs. Rényi-entropy trade-offs for discrete memoryless sources.
//!
//! Given a joint distribution over a hidden variable `Y` and an observed
//! variable `X`, this crate studies representations `W` of `X` (Markov chain
//! `Y - X - W`, `|W| = M`) that maximize the relevance `I(Y; W)` while keeping
//! the Rényi entropy cost `H_α(W)` small, for orders `α ∈ (0, 1]` (`α = 1` is
//! the Shannon case). The central object is the upper concave envelope of the
//! achievable `(H_α(W), I(Y; W))` pairs, which is attained by deterministic
//! maps `g: X → {1..M}` and realized operationally by time-sharing between at
//! most two of them.
//!
//! The crate provides:
//!
//! - [`prob`]: exact finite-distribution primitives (entropies, divergences,
//!   mutual information), all in bits;
//! - [`bottleneck`]: channel/map types and the induced system under the
//!   Markov chain;
//! - [`frontier`]: exhaustive enumeration of deterministic maps and the
//!   upper concave envelope with witness maps at its vertices;
//! - [`solver`]: an iterative cluster-reassignment solver with β-sweeps and
//!   restarts that estimates the envelope without full enumeration;
//! - [`canonical`]: constructors and closed-form checks for exactly solvable
//!   instances (functional sources, block-diagonal joints);
//! - [`timeshare`]: symbol-wise time-sharing codes achieving envelope points,
//!   with analytic and Monte Carlo evaluation.
//!
//! The `parallel` feature (enabled by default) runs map enumeration and
//! β-sweeps on a rayon thread pool; results are merged deterministically, so
//! parallel and sequential runs produce identical output.

pub mod bottleneck;
pub mod canonical;
pub mod frontier;
pub mod prob;
pub mod solver;
pub mod timeshare;

/// Errors reported by this crate.
///
/// Validation failures carry enough context (indices, sums) for a caller to
/// point at the offending part of its input.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("distribution must have at least one mass")]
    EmptyDistribution,
    #[error("mass at index {index} is {value}, must be non-negative")]
    NegativeMass { index: usize, value: f64 },
    #[error("masses sum to {sum:.6} which is not within 1e-9 of 1")]
    NotNormalized { sum: f64 },
    #[error("joint matrix must be non-empty and rectangular")]
    BadJointShape,
    #[error("joint entry at row {row}, column {col} is {value}, must be non-negative")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("joint entries sum to {sum:.6} which is not within 1e-9 of 1")]
    JointNotNormalized { sum: f64 },
    #[error("column {col} of the joint has zero mass; every source symbol needs positive probability")]
    ZeroColumn { col: usize },
    #[error("Renyi order {alpha} outside the supported range (0, 1]")]
    InvalidOrder { alpha: f64 },
    #[error("alphabet size mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("channel row {row} sums to {sum:.6} which is not within 1e-9 of 1")]
    RowNotNormalized { row: usize, sum: f64 },
    #[error("symbol {symbol} assigned to cluster {cluster}, valid range is 0..{m}")]
    ClusterOutOfRange { symbol: usize, cluster: u32, m: u32 },
    #[error("enumeration infeasible: {count:.3e} deterministic maps exceeds the cap of {cap}")]
    Infeasible { count: f64, cap: u64 },
    #[error("cannot build an envelope from an empty point set")]
    EmptyPointSet,
    #[error("point set does not contain the origin (0, 0)")]
    MissingOrigin,
    #[error("gamma must be non-negative, got {gamma}")]
    NegativeGamma { gamma: f64 },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid block specification: {0}")]
    InvalidBlockSpec(String),
    #[error("need at least {required} clusters, got {m}")]
    TooFewClusters { m: u32, required: usize },
    #[error("p_x must be strictly positive, mass at index {index} is zero")]
    ZeroMass { index: usize },
    #[error("block length must be at least 1")]
    EmptyCode,
}

pub type Result<T> = std::result::Result<T, Error>;

pub use bottleneck::{induce, induce_map, objective, Channel, DeterministicMap, InducedSystem};
pub use frontier::{
    brute_force_points, brute_force_points_seq, enumerate_deterministic, upper_concave_envelope,
    Envelope, MapEnumeration, TradeoffPoint,
};
pub use prob::{
    kl_divergence, mutual_information, renyi_entropy, shannon_entropy, Distribution,
    JointDistribution, RenyiOrder,
};
pub use solver::{sweep, sweep_seq, SolverConfig, SolverRun, SweepOutcome};
