use nalgebra::DVector;
use num_complex::Complex64;

use super::{CMatrix, CVector, LinalgError, RANK_TOLERANCE};

/// Full singular value decomposition `A = U diag(sigma) V†`.
///
/// `u` is m×m and `v` is n×n; `sigma` has `min(m, n)` entries in descending order.
#[derive(Debug, Clone)]
pub struct SvdFactorization {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

impl SvdFactorization {
    pub fn rows(&self) -> usize {
        self.u.nrows()
    }

    pub fn cols(&self) -> usize {
        self.v.nrows()
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `RANK_TOLERANCE * sigma_max`.
    pub fn numerical_rank(&self) -> usize {
        let cutoff = RANK_TOLERANCE * self.sigma_max();
        self.sigma.iter().filter(|&&s| s > cutoff).count()
    }

    /// Smallest singular value counted as nonzero.
    pub fn sigma_min_nonzero(&self) -> Option<f64> {
        let rank = self.numerical_rank();
        (rank > 0).then(|| self.sigma[rank - 1])
    }

    pub fn is_full_column_rank(&self) -> bool {
        self.rows() >= self.cols() && self.numerical_rank() == self.cols()
    }

    /// Singular values padded with zeros to length n.
    pub fn sigma_padded(&self) -> Vec<f64> {
        let mut s = self.sigma.clone();
        s.resize(self.cols(), 0.0);
        s
    }

    /// `U† b`, the coefficients of `b` in the left singular basis.
    pub fn project(&self, b: &CVector) -> CVector {
        self.u.adjoint() * b
    }

    pub fn reconstruct(&self) -> CMatrix {
        let (m, n) = (self.rows(), self.cols());
        let mut s = CMatrix::zeros(m, n);
        for (i, &sv) in self.sigma.iter().enumerate() {
            s[(i, i)] = Complex64::new(sv, 0.0);
        }
        &self.u * s * self.v.adjoint()
    }
}

const RECONSTRUCTION_TOLERANCE: f64 = 1e-10;

pub fn compute_svd(a: &CMatrix) -> Result<SvdFactorization, LinalgError> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Err(LinalgError::Empty { rows: m, cols: n });
    }
    // nalgebra's own default tolerance; a bare machine epsilon makes the
    // complex bidiagonal sweep stall and return garbage on rank-deficient input
    let svd = a
        .clone()
        .try_svd(true, true, 5.0 * f64::EPSILON, 0)
        .ok_or(LinalgError::SvdConvergence { rows: m, cols: n })?;
    let (Some(u_thin), Some(v_t)) = (svd.u, svd.v_t) else {
        return Err(LinalgError::SvdConvergence { rows: m, cols: n });
    };
    let k = m.min(n);

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));

    let sigma: Vec<f64> = order
        .iter()
        .map(|&i| svd.singular_values[i].max(0.0))
        .collect();
    let v_thin = v_t.adjoint();
    let u_cols: Vec<CVector> = order
        .iter()
        .map(|&i| u_thin.column(i).into_owned())
        .collect();
    let v_cols: Vec<CVector> = order
        .iter()
        .map(|&i| v_thin.column(i).into_owned())
        .collect();

    let out = SvdFactorization {
        u: complete_basis(u_cols, m),
        sigma,
        v: complete_basis(v_cols, n),
    };
    if (out.reconstruct() - a).norm() > RECONSTRUCTION_TOLERANCE * a.norm() {
        return Err(LinalgError::SvdConvergence { rows: m, cols: n });
    }
    Ok(out)
}

/// Extends orthonormal columns to a full unitary by Gram-Schmidt against the
/// standard basis.
fn complete_basis(mut cols: Vec<CVector>, dim: usize) -> CMatrix {
    let mut candidate = 0;
    while cols.len() < dim && candidate < dim {
        let mut e = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        e[candidate] = Complex64::new(1.0, 0.0);
        candidate += 1;
        // two passes of classical Gram-Schmidt
        for _ in 0..2 {
            for c in &cols {
                let overlap = c.dotc(&e);
                e -= c * overlap;
            }
        }
        let norm = e.norm();
        if norm > 1e-6 {
            cols.push(e / Complex64::new(norm, 0.0));
        }
    }
    CMatrix::from_columns(&cols)
}
