use num_complex::Complex64;

use super::{check_mu, CVector, LinalgError, SvdFactorization};

/// A regularized solution with its two L-curve coordinates.
#[derive(Debug, Clone)]
pub struct TikhonovSolution {
    pub mu: f64,
    pub x: CVector,
    pub solution_norm: f64,
    pub residual_norm: f64,
    /// Set when `mu = 0` and the pseudoinverse convention dropped zero modes.
    pub rank_deficient: bool,
    /// Number of retained modes for a TSVD solution.
    pub truncation: Option<usize>,
}

/// Tikhonov filter factors `sigma_i^2 / (sigma_i^2 + mu^2)`.
///
/// At `mu = 0` this is the pseudoinverse filter: one on numerically nonzero
/// singular values and zero elsewhere.
pub fn tikhonov_filters(svd: &SvdFactorization, mu: f64) -> Vec<f64> {
    let rank = svd.numerical_rank();
    svd.sigma
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            if mu == 0.0 {
                if i < rank {
                    1.0
                } else {
                    0.0
                }
            } else {
                let s2 = s * s;
                s2 / (s2 + mu * mu)
            }
        })
        .collect()
}

/// Filtered SVD solution `sum_i f_i (u_i† b / sigma_i) v_i`.
///
/// Modes with a zero filter factor contribute nothing, so zero singular
/// values never divide.
pub fn filtered_solve(
    svd: &SvdFactorization,
    b: &CVector,
    filters: &[f64],
    mu: f64,
) -> Result<TikhonovSolution, LinalgError> {
    if b.len() != svd.rows() {
        return Err(LinalgError::Dimension(format!(
            "right-hand side has {} entries, factorization has {} rows",
            b.len(),
            svd.rows()
        )));
    }
    if filters.len() != svd.sigma.len() {
        return Err(LinalgError::Dimension(format!(
            "{} filter factors for {} singular values",
            filters.len(),
            svd.sigma.len()
        )));
    }
    let beta = svd.project(b);
    let n = svd.cols();
    let mut x = CVector::zeros(n);
    for (i, (&f, &s)) in filters.iter().zip(&svd.sigma).enumerate() {
        if f == 0.0 {
            continue;
        }
        let coeff = (beta[i] / s) * f;
        x.axpy(coeff, &svd.v.column(i), Complex64::new(1.0, 0.0));
    }

    // A x - b through the factors: U (Sigma V† x) - b
    let vx = svd.v.adjoint() * &x;
    let mut sx = CVector::zeros(svd.rows());
    for (i, &s) in svd.sigma.iter().enumerate() {
        sx[i] = vx[i] * s;
    }
    let residual = &svd.u * sx - b;

    Ok(TikhonovSolution {
        mu,
        solution_norm: x.norm(),
        residual_norm: residual.norm(),
        x,
        rank_deficient: false,
        truncation: None,
    })
}

pub fn tikhonov_solve(
    svd: &SvdFactorization,
    b: &CVector,
    mu: f64,
) -> Result<TikhonovSolution, LinalgError> {
    check_mu(mu)?;
    let filters = tikhonov_filters(svd, mu);
    let mut sol = filtered_solve(svd, b, &filters, mu)?;
    sol.rank_deficient = mu == 0.0 && svd.numerical_rank() < svd.cols();
    Ok(sol)
}

/// Truncated SVD solution keeping the `k` largest singular triplets.
pub fn tsvd_solve(
    svd: &SvdFactorization,
    b: &CVector,
    k: usize,
) -> Result<TikhonovSolution, LinalgError> {
    let rank = svd.numerical_rank();
    if k == 0 || k > rank {
        return Err(LinalgError::TruncationOutOfRange { k, rank });
    }
    let filters: Vec<f64> = (0..svd.sigma.len())
        .map(|i| if i < k { 1.0 } else { 0.0 })
        .collect();
    let mut sol = filtered_solve(svd, b, &filters, 0.0)?;
    sol.truncation = Some(k);
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{compute_svd, real_diagonal, real_vector};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn identity_with_unit_mu_halves() {
        let svd = compute_svd(&real_diagonal(&[1.0, 1.0])).unwrap();
        let sol = tikhonov_solve(&svd, &real_vector(&[1.0, 0.0]), 1.0).unwrap();
        assert!(close(sol.x[0].re, 0.5, 1e-14));
        assert!(sol.x[1].norm() < 1e-14);
    }

    #[test]
    fn zero_mu_is_plain_inverse() {
        let svd = compute_svd(&real_diagonal(&[1.0, 0.5])).unwrap();
        let sol = tikhonov_solve(&svd, &real_vector(&[1.0, 1.0]), 0.0).unwrap();
        assert!(close(sol.x[0].re, 1.0, 1e-14));
        assert!(close(sol.x[1].re, 2.0, 1e-14));
        assert!(sol.residual_norm < 1e-14);
        assert!(!sol.rank_deficient);
    }

    #[test]
    fn geometric_diagonal_matches_termwise_sum() {
        let sigma = [1.0, 0.5, 0.1, 0.01];
        let mu = 0.1;
        let svd = compute_svd(&real_diagonal(&sigma)).unwrap();
        let sol = tikhonov_solve(&svd, &real_vector(&[1.0; 4]), mu).unwrap();
        // oracle: x_i = f_i * b_i / sigma_i with f_i computed separately
        let mut norm_sq = 0.0;
        for (i, &s) in sigma.iter().enumerate() {
            let f = s * s / (s * s + mu * mu);
            let xi = f * 1.0 / s;
            norm_sq += xi * xi;
            assert!(close(sol.x[i].norm(), xi, 1e-12), "component {i}");
        }
        assert!(close(sol.solution_norm, norm_sq.sqrt(), 1e-12));
        // frozen: sqrt((1/1.01)^2 + (0.5/0.26)^2 + (0.1/0.02)^2 + (0.01/0.0101)^2)
        assert!(close(sol.solution_norm, 5.537_040_450_537_168, 1e-9));
    }

    #[test]
    fn singular_matrix_at_zero_mu_uses_pseudoinverse() {
        let svd = compute_svd(&real_diagonal(&[2.0, 0.0])).unwrap();
        let sol = tikhonov_solve(&svd, &real_vector(&[2.0, 3.0]), 0.0).unwrap();
        assert!(sol.rank_deficient);
        assert!(close(sol.x[0].norm(), 1.0, 1e-14));
        assert!(sol.x[1].norm() < 1e-14);
        assert!(close(sol.residual_norm, 3.0, 1e-14));
    }

    #[test]
    fn tsvd_diagonal_cases() {
        let svd = compute_svd(&real_diagonal(&[2.0, 1.0])).unwrap();
        let b = real_vector(&[2.0, 1.0]);
        let one = tsvd_solve(&svd, &b, 1).unwrap();
        assert!(close(one.x[0].norm(), 1.0, 1e-14) && one.x[1].norm() < 1e-14);
        let two = tsvd_solve(&svd, &b, 2).unwrap();
        assert!(close(two.x[0].norm(), 1.0, 1e-14) && close(two.x[1].norm(), 1.0, 1e-14));
    }

    #[test]
    fn tsvd_geometric_termwise() {
        let sigma = [1.0, 0.5, 0.1, 0.01];
        let svd = compute_svd(&real_diagonal(&sigma)).unwrap();
        let sol = tsvd_solve(&svd, &real_vector(&[1.0; 4]), 2).unwrap();
        assert!(close(sol.solution_norm, (1.0f64 + 4.0).sqrt(), 1e-12));
        assert!(close(sol.residual_norm, 2.0f64.sqrt(), 1e-12));
    }

    #[test]
    fn tsvd_rejects_k_beyond_rank() {
        let svd = compute_svd(&real_diagonal(&[1.0, 0.0, 0.0])).unwrap();
        let err = tsvd_solve(&svd, &real_vector(&[1.0; 3]), 2).unwrap_err();
        assert!(matches!(
            err,
            LinalgError::TruncationOutOfRange { k: 2, rank: 1 }
        ));
        assert!(err.to_string().contains("rank 1"));
    }

    #[test]
    fn negative_mu_rejected() {
        let svd = compute_svd(&real_diagonal(&[1.0])).unwrap();
        assert!(tikhonov_solve(&svd, &real_vector(&[1.0]), -0.1).is_err());
    }
}
