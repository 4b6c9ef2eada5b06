//! Regularized HHL states and the norm estimators built on them.
//!
//! The solver runs on the Hermitian dilation of `A_mu`, whose eigenvalues
//! are `±σ̃_j` plus zeros. Register layouts, most significant first:
//!
//! * solution state: `[flag1][phase][system]`
//! * multiplied state: `[flag1][flag2][phase][system]`
//! * residual state: `[sel][last][flag1][flag2][phase][system]`
//!
//! The system register holds `s = ceil(log2(m + 2n))` qubits; the right-hand
//! side sits in its first `m` entries and the solution in the last `n` of
//! the `m + 2n` used ones.

mod config;
mod norms;
mod states;

pub use config::HhlConfig;
pub use norms::{
    estimate_norms, estimate_residual_norm, estimate_solution_norm, NormEstimate, NormEstimates,
};
pub use norms::{residual_prep, solution_prep};
pub use states::{
    apply_a_state, good_block, hhl_solution_state, prepare_b_state, residual_good_qubits,
    residual_state, system_qubits,
};

use thiserror::Error;

use crate::amplitude::AmplitudeError;
use crate::linalg::LinalgError;
use crate::sim::SimError;

#[derive(Debug, Error)]
pub enum HhlError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Amplitude(#[from] AmplitudeError),
    #[error("right-hand side is zero")]
    ZeroRhs,
    #[error("right-hand side has {found} entries, the matrix has {expected} rows")]
    RhsLength { expected: usize, found: usize },
    #[error("system register of {width} qubits cannot hold {needed} entries")]
    WidthTooSmall { width: usize, needed: usize },
    #[error(
        "phase register of {bits} bits resolves eigenvalue gaps of {resolution:.4e}, \
         but the smallest gap in the spectrum is {min_gap:.4e}"
    )]
    PhaseResolution {
        bits: usize,
        resolution: f64,
        min_gap: f64,
    },
    #[error(
        "rotation constant {c_tilde} exceeds the smallest nonzero eigenvalue magnitude {sigma_min}"
    )]
    RotationConstant { c_tilde: f64, sigma_min: f64 },
    #[error("eigenvalue {lambda} times evolution time {t} leaves (-pi, pi)")]
    EvolutionRange { lambda: f64, t: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("target accuracy must be positive, got {0}")]
    InvalidAccuracy(f64),
}
