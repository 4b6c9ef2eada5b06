use num_complex::Complex64;

use super::{check_mu, compute_svd, CMatrix, LinalgError, SvdFactorization};

/// The stacked matrix `A_mu = [A; mu I]` and its Hermitian dilation.
///
/// The dilation uses the three-block layout with row/column blocks of sizes
/// `m`, `n`, `n`:
///
/// ```text
/// [ 0    0    A   ]
/// [ 0    0    mu I]
/// [ A†   mu I 0   ]
/// ```
///
/// Its nonzero eigenvalues are `±sqrt(sigma_i^2 + mu^2)`.
#[derive(Debug, Clone)]
pub struct ExtendedMatrix {
    pub mu: f64,
    pub a_mu: CMatrix,
    pub dilation: CMatrix,
    /// `f64::INFINITY` when `mu = 0` and `A` lacks full column rank.
    pub kappa_mu: f64,
    /// Singular values of the original `A`, descending.
    pub sigma: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl ExtendedMatrix {
    /// Rows of the original matrix.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Columns of the original matrix.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn original(&self) -> CMatrix {
        self.a_mu.rows(0, self.rows).into_owned()
    }

    pub fn dilation_dim(&self) -> usize {
        self.rows + 2 * self.cols
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Singular values `sqrt(sigma_i^2 + mu^2)` of `A_mu`, one per column,
    /// descending.
    pub fn extended_singular_values(&self) -> Vec<f64> {
        let mut s = self.sigma.clone();
        s.resize(self.cols, 0.0);
        s.iter()
            .map(|&v| (v * v + self.mu * self.mu).sqrt())
            .collect()
    }

    /// Smallest nonzero singular value of `A_mu` (equivalently the smallest
    /// nonzero eigenvalue magnitude of the dilation).
    pub fn extended_sigma_min(&self) -> f64 {
        let vals = self.extended_singular_values();
        let cutoff = super::RANK_TOLERANCE * vals[0];
        vals.into_iter()
            .filter(|&v| v > cutoff)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn extended_sigma_max(&self) -> f64 {
        self.extended_singular_values()[0]
    }

    /// Dilation of the unregularized `A` (zero middle block).
    pub fn unregularized_dilation(&self) -> CMatrix {
        dilation_of(&self.original(), 0.0)
    }
}

/// Three-block Hermitian dilation of `[A; mu I]`.
pub fn dilation_of(a: &CMatrix, mu: f64) -> CMatrix {
    let (m, n) = a.shape();
    let dim = m + 2 * n;
    let mut d = CMatrix::zeros(dim, dim);
    d.view_mut((0, m + n), (m, n)).copy_from(a);
    d.view_mut((m + n, 0), (n, m)).copy_from(&a.adjoint());
    for i in 0..n {
        d[(m + i, m + n + i)] = Complex64::new(mu, 0.0);
        d[(m + n + i, m + i)] = Complex64::new(mu, 0.0);
    }
    d
}

pub fn build_extended(a: &CMatrix, mu: f64) -> Result<ExtendedMatrix, LinalgError> {
    check_mu(mu)?;
    let svd = compute_svd(a)?;
    let (m, n) = a.shape();
    let mut a_mu = CMatrix::zeros(m + n, n);
    a_mu.view_mut((0, 0), (m, n)).copy_from(a);
    for i in 0..n {
        a_mu[(m + i, i)] = Complex64::new(mu, 0.0);
    }
    let kappa_mu = match condition_number_mu(&svd, mu) {
        Ok(k) => k,
        Err(LinalgError::InfiniteCondition { .. }) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    Ok(ExtendedMatrix {
        mu,
        a_mu,
        dilation: dilation_of(a, mu),
        kappa_mu,
        sigma: svd.sigma,
        rows: m,
        cols: n,
    })
}

/// Condition number of `[A; mu I]` from the singular values of `A`.
///
/// Full column rank: `sqrt((s_max^2 + mu^2) / (s_n^2 + mu^2))`. Rank deficient
/// or `m < n`: `sqrt((s_max^2 + mu^2) / mu^2)`.
pub fn condition_number_mu(svd: &SvdFactorization, mu: f64) -> Result<f64, LinalgError> {
    check_mu(mu)?;
    let smax2 = svd.sigma_max().powi(2);
    let mu2 = mu * mu;
    if svd.is_full_column_rank() {
        let sn = svd.sigma[svd.cols() - 1];
        Ok(((smax2 + mu2) / (sn * sn + mu2)).sqrt())
    } else if mu > 0.0 {
        Ok(((smax2 + mu2) / mu2).sqrt())
    } else {
        Err(LinalgError::InfiniteCondition {
            rank: svd.numerical_rank(),
            cols: svd.cols(),
        })
    }
}
