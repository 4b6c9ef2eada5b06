//! Regularization-parameter selection over a geometric grid.
//!
//! The quantum pipelines estimate per-parameter norms in superposition,
//! write a criterion into a register and hand it to Dürr–Høyer minimum
//! finding. [`classical_select`] evaluates the same criteria exactly and is
//! the reference every pipeline is compared with.

mod branches;
mod classical;
mod durr_hoyer;
mod gcv;
mod grid;
mod lcurve;
mod options;
mod singular;

pub use classical::{classical_select, Criterion};
pub use durr_hoyer::{durr_hoyer_budget, durr_hoyer_min, MinimumSearch};
pub use gcv::gcv_pipeline;
pub use grid::ParameterGrid;
pub use lcurve::lcurve_pipeline;
pub use options::{LCurveShift, PipelineOptions};
pub use singular::{principal_singular_values, principal_singular_values_at, PrincipalSpectrum};

use serde::Serialize;
use thiserror::Error;

use crate::amplitude::AmplitudeError;
use crate::hhl::HhlError;
use crate::linalg::LinalgError;
use crate::sim::SimError;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Amplitude(#[from] AmplitudeError),
    #[error(transparent)]
    Hhl(#[from] HhlError),
    #[error("at mu = {mu}: {source}")]
    Branch {
        mu: f64,
        #[source]
        source: HhlError,
    },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("rank {r} is outside 1..={max}")]
    InvalidRank { r: usize, max: usize },
    #[error("top {r} modes hold {mass:.4} of the Frobenius mass, below the 0.99 low-rank premise")]
    LowRankPremise { r: usize, mass: f64 },
    #[error("found {found} singular-value clusters in {shots} shots, {needed} needed (deficit {})", needed - found)]
    TooFewClusters {
        found: usize,
        needed: usize,
        shots: usize,
    },
}

/// One point of the L-curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LCurvePoint {
    pub mu: f64,
    pub residual_norm: f64,
    pub solution_norm: f64,
}

/// Per-parameter GCV data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GcvPoint {
    pub mu: f64,
    pub residual_norm: f64,
    /// `m - n + g(mu)`.
    pub denominator: f64,
    pub value: f64,
    /// Set when the denominator is not positive.
    pub flagged: bool,
}

/// Outcome of a parameter selection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionResult {
    pub chosen_index: usize,
    pub chosen_mu: f64,
    pub criterion_values: Vec<f64>,
    /// Oracle queries of the minimum search (grid size for exhaustive search).
    pub queries_used: u64,
    pub threshold_history: Vec<usize>,
    /// Controlled Grover applications behind one evaluation of every branch.
    pub estimation_queries: u64,
    pub lcurve: Vec<LCurvePoint>,
    pub gcv: Vec<GcvPoint>,
    /// Singular values the GCV trace was computed from.
    pub singular_values: Vec<f64>,
}

/// Lowest index attaining the minimum.
pub(crate) fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if v < &values[best] {
            best = i;
        }
    }
    best
}
