use super::{check_mu, tikhonov_solve, CVector, LinalgError, SvdFactorization};

/// A GCV value together with its denominator `m - n + sum mu^2/(sigma_i^2+mu^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcvEvaluation {
    pub value: f64,
    pub denominator: f64,
}

impl GcvEvaluation {
    /// Nonpositive denominators make the ratio meaningless as a trace-based
    /// criterion even when it evaluates.
    pub fn is_flagged(&self) -> bool {
        self.denominator <= 0.0
    }
}

fn ratio(residual_sq: f64, denominator: f64, mu: f64) -> Result<GcvEvaluation, LinalgError> {
    if denominator == 0.0 {
        return Err(LinalgError::ZeroGcvDenominator { mu });
    }
    Ok(GcvEvaluation {
        value: residual_sq / (denominator * denominator),
        denominator,
    })
}

/// `||A x_mu - b||^2 / [m - n + sum_{i=1}^n mu^2/(sigma_i^2 + mu^2)]^2`.
///
/// For `m < n` the singular values are padded with zeros up to `n`, which
/// makes the denominator equal to the trace of `I - A (A†A + mu^2 I)^{-1} A†`.
pub fn gcv_value(
    svd: &SvdFactorization,
    b: &CVector,
    mu: f64,
) -> Result<GcvEvaluation, LinalgError> {
    check_mu(mu)?;
    if mu == 0.0 {
        return Err(LinalgError::InvalidMu(mu));
    }
    let sol = tikhonov_solve(svd, b, mu)?;
    let mu2 = mu * mu;
    let g: f64 = svd.sigma_padded().iter().map(|s| mu2 / (s * s + mu2)).sum();
    let denominator = svd.rows() as f64 - svd.cols() as f64 + g;
    ratio(sol.residual_norm * sol.residual_norm, denominator, mu)
}

/// GCV with the trace approximated from the `r` largest singular values.
pub fn gcv_lowrank(
    sigma_r: &[f64],
    residual_sq: f64,
    rows: usize,
    cols: usize,
    mu: f64,
) -> Result<GcvEvaluation, LinalgError> {
    check_mu(mu)?;
    let mu2 = mu * mu;
    let g: f64 = sigma_r
        .iter()
        .map(|s| if mu2 == 0.0 { 0.0 } else { mu2 / (s * s + mu2) })
        .sum();
    let denominator = rows as f64 - cols as f64 + g;
    ratio(residual_sq, denominator, mu)
}
