//! Dense classical mathematics of Tikhonov regularization.
//!
//! Everything here is exact (up to floating point) and serves two roles: it
//! feeds spectra and matrices into the quantum simulation, and it is the
//! oracle every quantum estimate is checked against.

mod extended;
mod gcv;
mod svd;
mod tikhonov;

pub use extended::{build_extended, condition_number_mu, dilation_of, ExtendedMatrix};
pub use gcv::{gcv_lowrank, gcv_value, GcvEvaluation};
pub use svd::{compute_svd, SvdFactorization};
pub use tikhonov::{
    filtered_solve, tikhonov_filters, tikhonov_solve, tsvd_solve, TikhonovSolution,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative threshold below which a singular value counts as zero.
pub const RANK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is empty ({rows}x{cols})")]
    Empty { rows: usize, cols: usize },
    #[error("SVD did not converge for {rows}x{cols} matrix")]
    SvdConvergence { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("regularization parameter must be finite and nonnegative, got {0}")]
    InvalidMu(f64),
    #[error("truncation index {k} is outside 1..={rank} (numerical rank {rank})")]
    TruncationOutOfRange { k: usize, rank: usize },
    #[error("condition number of the extended matrix is infinite: mu = 0 with rank {rank} < {cols} columns")]
    InfiniteCondition { rank: usize, cols: usize },
    #[error("GCV denominator vanishes at mu = {mu}")]
    ZeroGcvDenominator { mu: f64 },
}

/// An ill-conditioned system `A x = b` plus whatever ground truth is known.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularizedProblem {
    pub a: CMatrix,
    pub b: CVector,
    pub noise_level: Option<f64>,
    pub x_true: Option<CVector>,
}

impl RegularizedProblem {
    pub fn new(a: CMatrix, b: CVector) -> Result<Self, LinalgError> {
        if a.nrows() == 0 || a.ncols() == 0 {
            return Err(LinalgError::Empty {
                rows: a.nrows(),
                cols: a.ncols(),
            });
        }
        if b.len() != a.nrows() {
            return Err(LinalgError::Dimension(format!(
                "right-hand side has {} entries, matrix has {} rows",
                b.len(),
                a.nrows()
            )));
        }
        Ok(Self {
            a,
            b,
            noise_level: None,
            x_true: None,
        })
    }

    pub fn with_noise_level(mut self, noise: f64) -> Result<Self, LinalgError> {
        if noise.is_nan() || noise < 0.0 {
            return Err(LinalgError::Dimension(format!(
                "noise level must be nonnegative, got {noise}"
            )));
        }
        self.noise_level = Some(noise);
        Ok(self)
    }

    pub fn with_true_solution(mut self, x: CVector) -> Result<Self, LinalgError> {
        if x.len() != self.a.ncols() {
            return Err(LinalgError::Dimension(format!(
                "true solution has {} entries, matrix has {} columns",
                x.len(),
                self.a.ncols()
            )));
        }
        self.x_true = Some(x);
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }
}

pub(crate) fn check_mu(mu: f64) -> Result<(), LinalgError> {
    if mu.is_finite() && mu >= 0.0 {
        Ok(())
    } else {
        Err(LinalgError::InvalidMu(mu))
    }
}

/// Builds a complex matrix from real entries given row by row.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must match shape");
    CMatrix::from_fn(rows, cols, |i, j| {
        Complex64::new(entries[i * cols + j], 0.0)
    })
}

pub fn real_vector(entries: &[f64]) -> CVector {
    CVector::from_iterator(
        entries.len(),
        entries.iter().map(|&v| Complex64::new(v, 0.0)),
    )
}

pub fn real_diagonal(diag: &[f64]) -> CMatrix {
    let n = diag.len();
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(diag[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}
