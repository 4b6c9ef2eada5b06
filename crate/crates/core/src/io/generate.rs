use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::IoError;
use crate::linalg::{CMatrix, CVector, RegularizedProblem};

/// Synthetic test families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    /// Random orthonormal factors, `σ_i = γ^(i-1)`.
    GeometricSpectrum,
    /// Geometric spectrum cut to `rank` nonzero values.
    LowRank,
    /// `a_ij = 1 / (i + j - 1)`.
    HilbertLike,
}

impl FromStr for ProblemKind {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "geometric-spectrum" | "geometric" => Ok(Self::GeometricSpectrum),
            "low-rank" => Ok(Self::LowRank),
            "hilbert-like" | "hilbert" => Ok(Self::HilbertLike),
            other => Err(IoError::Generator(format!(
                "unknown problem kind '{other}' (expected geometric-spectrum, low-rank or hilbert-like)"
            ))),
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::GeometricSpectrum => "geometric-spectrum",
            Self::LowRank => "low-rank",
            Self::HilbertLike => "hilbert-like",
        })
    }
}

/// Shape knobs of the generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratorParams {
    pub gamma: f64,
    /// Nonzero singular values of the low-rank family.
    pub rank: usize,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            gamma: 0.5,
            rank: 2,
        }
    }
}

pub fn generate_problem(
    kind: ProblemKind,
    m: usize,
    n: usize,
    noise: f64,
    seed: u64,
) -> Result<RegularizedProblem, IoError> {
    generate_problem_with(kind, m, n, noise, seed, &GeneratorParams::default())
}

/// Builds `A`, a unit-norm Gaussian `x_true`, and
/// `b = A x_true + noise · g / ‖g‖` with Gaussian `g`. Everything is drawn
/// from one ChaCha8 stream seeded with `seed`.
pub fn generate_problem_with(
    kind: ProblemKind,
    m: usize,
    n: usize,
    noise: f64,
    seed: u64,
    params: &GeneratorParams,
) -> Result<RegularizedProblem, IoError> {
    if m == 0 || n == 0 {
        return Err(IoError::Generator(format!(
            "dimensions must be positive, got {m}x{n}"
        )));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(IoError::Generator(format!(
            "noise must be nonnegative, got {noise}"
        )));
    }
    if !(params.gamma > 0.0 && params.gamma <= 1.0) {
        return Err(IoError::Generator(format!(
            "gamma must lie in (0, 1], got {}",
            params.gamma
        )));
    }
    let k = m.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = match kind {
        ProblemKind::GeometricSpectrum => spectral(m, n, &geometric(k, params.gamma, k), &mut rng),
        ProblemKind::LowRank => {
            if params.rank == 0 || params.rank > k {
                return Err(IoError::Generator(format!(
                    "rank must lie in 1..={k}, got {}",
                    params.rank
                )));
            }
            spectral(m, n, &geometric(k, params.gamma, params.rank), &mut rng)
        }
        ProblemKind::HilbertLike => {
            CMatrix::from_fn(m, n, |i, j| Complex64::new(1.0 / (i + j + 1) as f64, 0.0))
        }
    };
    let x_true = unit_gaussian(n, &mut rng);
    let g = unit_gaussian(m, &mut rng);
    let b = &a * &x_true + g * Complex64::new(noise, 0.0);
    Ok(RegularizedProblem::new(a, b)?
        .with_noise_level(noise)?
        .with_true_solution(x_true)?)
}

fn geometric(k: usize, gamma: f64, nonzero: usize) -> Vec<f64> {
    (0..k)
        .map(|i| {
            if i < nonzero {
                gamma.powi(i as i32)
            } else {
                0.0
            }
        })
        .collect()
}

fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// First `cols` columns of the orthogonal factor of a Gaussian matrix.
fn orthonormal<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    gaussian_matrix(rows, cols, rng)
        .qr()
        .q()
        .columns(0, cols)
        .into_owned()
}

fn spectral<R: Rng>(m: usize, n: usize, sigma: &[f64], rng: &mut R) -> CMatrix {
    let k = sigma.len();
    let u = orthonormal(m, k, rng);
    let v = orthonormal(n, k, rng);
    let a =
        &u * DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(sigma)) * v.transpose();
    a.map(|x| Complex64::new(x, 0.0))
}

fn unit_gaussian<R: Rng>(len: usize, rng: &mut R) -> CVector {
    let g = nalgebra::DVector::<f64>::from_fn(len, |_, _| rng.sample(StandardNormal));
    let norm = g.norm();
    g.map(|x| Complex64::new(x / norm, 0.0))
}
