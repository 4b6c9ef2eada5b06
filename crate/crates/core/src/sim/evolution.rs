use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{Operator, SimError, UnitaryOp, UNITARY_TOLERANCE};

/// Zero-pads a square matrix to the next power-of-two dimension.
pub fn pad_to_power_of_two(h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = h.nrows();
    let d = n.max(2).next_power_of_two();
    let mut out = DMatrix::zeros(d, d);
    out.view_mut((0, 0), (n, n)).copy_from(h);
    out
}

/// Exact `exp(-i H t)` through the eigendecomposition of `H`.
///
/// Non-power-of-two inputs are zero-padded first; padding directions carry
/// eigenvalue zero and evolve trivially.
pub fn hamiltonian_evolution(h: &DMatrix<Complex64>, t: f64) -> Result<UnitaryOp, SimError> {
    Ok(Evolution::new(h, t)?.op)
}

/// `exp(-i H t)` that keeps the spectrum of `H`, so that every power
/// `exp(-i H k t)` is formed directly instead of by repeated products.
#[derive(Debug, Clone)]
pub struct Evolution {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
    t: f64,
    op: UnitaryOp,
}

impl Evolution {
    pub fn new(h: &DMatrix<Complex64>, t: f64) -> Result<Self, SimError> {
        if h.nrows() != h.ncols() {
            return Err(SimError::DimensionMismatch {
                expected: h.nrows(),
                found: h.ncols(),
            });
        }
        let deviation = (h - h.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > UNITARY_TOLERANCE {
            return Err(SimError::NotHermitian { deviation });
        }
        let padded = pad_to_power_of_two(h);
        super::check_capacity(padded.nrows().trailing_zeros() as usize)?;
        // symmetrize so the eigensolver sees an exactly Hermitian input
        let herm = (&padded + padded.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        let eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let op = evolve(&eig.eigenvectors, &eigenvalues, t);
        Ok(Self {
            eigenvalues,
            eigenvectors: eig.eigenvectors,
            t,
            op,
        })
    }

    pub fn unitary(&self) -> &UnitaryOp {
        &self.op
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// Eigenvalues of the (padded) Hamiltonian.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

fn evolve(vectors: &DMatrix<Complex64>, values: &[f64], t: f64) -> UnitaryOp {
    let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|l| Complex64::from_polar(1.0, -l * t)),
    ));
    UnitaryOp::from_matrix_unchecked(vectors * phases * vectors.adjoint())
}

impl Operator for Evolution {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn apply_to(&self, amps: &mut [Complex64]) {
        self.op.apply_to(amps)
    }

    fn apply_adjoint_to(&self, amps: &mut [Complex64]) {
        self.op.apply_adjoint_to(amps)
    }

    fn power(&self, k: i64) -> Box<dyn Operator + '_> {
        Box::new(evolve(
            &self.eigenvectors,
            &self.eigenvalues,
            self.t * k as f64,
        ))
    }
}
