use serde::Serialize;

use super::SearchError;

/// Regularization parameters `mu_j = mu0 * rho^j`, `j = 1..=p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterGrid {
    pub mus: Vec<f64>,
    pub rho: f64,
    pub p: usize,
}

impl ParameterGrid {
    pub fn new(mu0: f64, rho: f64, p: usize) -> Result<Self, SearchError> {
        if !(mu0 > 0.0 && mu0.is_finite()) {
            return Err(SearchError::InvalidGrid(format!(
                "mu0 must be positive, got {mu0}"
            )));
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(SearchError::InvalidGrid(format!(
                "rho must lie in (0, 1), got {rho}"
            )));
        }
        if p == 0 {
            return Err(SearchError::InvalidGrid(
                "grid needs at least one point".into(),
            ));
        }
        let mus: Vec<f64> = (1..=p).map(|j| mu0 * rho.powi(j as i32)).collect();
        if mus[p - 1] <= 0.0 {
            return Err(SearchError::InvalidGrid("grid underflows to zero".into()));
        }
        Ok(Self { mus, rho, p })
    }

    /// A grid from explicit values, which must be positive and strictly
    /// decreasing; `rho` is the mean ratio.
    pub fn from_values(mus: Vec<f64>) -> Result<Self, SearchError> {
        if mus.is_empty() {
            return Err(SearchError::InvalidGrid(
                "grid needs at least one point".into(),
            ));
        }
        if mus.iter().any(|&m| !(m > 0.0 && m.is_finite())) || mus.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(SearchError::InvalidGrid(
                "values must be positive and strictly decreasing".into(),
            ));
        }
        let p = mus.len();
        let rho = if p > 1 {
            (mus[p - 1] / mus[0]).powf(1.0 / (p - 1) as f64)
        } else {
            0.5
        };
        Ok(Self { mus, rho, p })
    }

    pub fn len(&self) -> usize {
        self.p
    }

    pub fn is_empty(&self) -> bool {
        self.p == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_law() {
        let g = ParameterGrid::new(1.0, 0.9, 16).unwrap();
        assert_eq!(g.mus.len(), 16);
        assert!((g.mus[0] - 0.9).abs() < 1e-15);
        for w in g.mus.windows(2) {
            assert!((w[1] / w[0] - 0.9).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_grids() {
        assert!(ParameterGrid::new(1.0, 1.0, 4).is_err());
        assert!(ParameterGrid::new(1.0, 0.5, 0).is_err());
        assert!(ParameterGrid::new(-1.0, 0.5, 3).is_err());
        assert!(ParameterGrid::from_values(vec![0.5, 0.5]).is_err());
        assert!(ParameterGrid::from_values(vec![0.5, 0.25]).is_ok());
    }
}
