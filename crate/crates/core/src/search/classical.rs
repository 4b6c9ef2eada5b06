use super::{
    argmin, GcvPoint, LCurvePoint, LCurveShift, ParameterGrid, SearchError, SelectionResult,
};
use crate::linalg::{
    compute_svd, gcv_lowrank, gcv_value, tikhonov_solve, LinalgError, RegularizedProblem,
};

/// What the exhaustive search minimizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    /// `(‖r‖ - shift.residual)² + (‖x‖ - shift.solution)²`.
    LCurveSum(LCurveShift),
    /// Full GCV with the exact trace.
    Gcv,
    /// GCV with the trace taken from the `r` largest singular values.
    GcvLowRank(usize),
}

/// L-curve criterion value at one point.
pub(crate) fn lcurve_criterion(residual: f64, solution: f64, shift: LCurveShift) -> f64 {
    (residual - shift.residual).powi(2) + (solution - shift.solution).powi(2)
}

fn zero_denominator(mu: f64, residual_norm: f64) -> GcvPoint {
    GcvPoint {
        mu,
        residual_norm,
        denominator: 0.0,
        value: f64::INFINITY,
        flagged: true,
    }
}

/// A flagged point cannot win.
fn criterion_of(pt: &GcvPoint) -> f64 {
    if pt.flagged {
        f64::INFINITY
    } else {
        pt.value
    }
}

/// Low-rank GCV at one point; a vanishing denominator is flagged, not an error.
pub(crate) fn gcv_point(
    sigma_r: &[f64],
    residual_sq: f64,
    rows: usize,
    cols: usize,
    mu: f64,
) -> Result<GcvPoint, SearchError> {
    let residual_norm = residual_sq.max(0.0).sqrt();
    match gcv_lowrank(sigma_r, residual_sq, rows, cols, mu) {
        Ok(eval) => Ok(GcvPoint {
            mu,
            residual_norm,
            denominator: eval.denominator,
            value: eval.value,
            flagged: eval.is_flagged(),
        }),
        Err(LinalgError::ZeroGcvDenominator { .. }) => Ok(zero_denominator(mu, residual_norm)),
        Err(e) => Err(e.into()),
    }
}

/// Exact per-parameter solves and an exhaustive argmin.
pub fn classical_select(
    problem: &RegularizedProblem,
    grid: &ParameterGrid,
    criterion: Criterion,
) -> Result<SelectionResult, SearchError> {
    if grid.is_empty() {
        return Err(SearchError::InvalidGrid("grid is empty".into()));
    }
    let svd = compute_svd(&problem.a)?;
    let (m, n) = (problem.rows(), problem.cols());
    let sigma_r = match criterion {
        Criterion::GcvLowRank(r) => {
            if r == 0 || r > n {
                return Err(SearchError::InvalidRank { r, max: n });
            }
            svd.sigma_padded()[..r].to_vec()
        }
        Criterion::Gcv => svd.sigma_padded(),
        Criterion::LCurveSum(_) => Vec::new(),
    };
    let mut lcurve = Vec::with_capacity(grid.len());
    let mut gcv = Vec::new();
    let mut values = Vec::with_capacity(grid.len());
    for &mu in &grid.mus {
        let sol = tikhonov_solve(&svd, &problem.b, mu)?;
        lcurve.push(LCurvePoint {
            mu,
            residual_norm: sol.residual_norm,
            solution_norm: sol.solution_norm,
        });
        let value = match criterion {
            Criterion::LCurveSum(shift) => {
                lcurve_criterion(sol.residual_norm, sol.solution_norm, shift)
            }
            Criterion::Gcv => {
                let pt = match gcv_value(&svd, &problem.b, mu) {
                    Ok(eval) => GcvPoint {
                        mu,
                        residual_norm: sol.residual_norm,
                        denominator: eval.denominator,
                        value: eval.value,
                        flagged: eval.is_flagged(),
                    },
                    Err(LinalgError::ZeroGcvDenominator { .. }) => {
                        zero_denominator(mu, sol.residual_norm)
                    }
                    Err(e) => return Err(e.into()),
                };
                gcv.push(pt);
                criterion_of(&pt)
            }
            Criterion::GcvLowRank(_) => {
                let pt = gcv_point(&sigma_r, sol.residual_norm.powi(2), m, n, mu)?;
                gcv.push(pt);
                criterion_of(&pt)
            }
        };
        values.push(value);
    }
    let chosen = argmin(&values);
    Ok(SelectionResult {
        chosen_index: chosen,
        chosen_mu: grid.mus[chosen],
        criterion_values: values,
        queries_used: grid.len() as u64,
        threshold_history: vec![chosen],
        estimation_queries: 0,
        lcurve,
        gcv,
        singular_values: sigma_r,
    })
}
