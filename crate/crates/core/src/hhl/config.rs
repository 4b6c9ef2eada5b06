use std::f64::consts::PI;

use super::HhlError;
use crate::linalg::{ExtendedMatrix, RANK_TOLERANCE};

/// Parameters of one regularized HHL run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HhlConfig {
    pub n_phase_bits: usize,
    /// Rotation constant `C̃`, at most the smallest nonzero `σ̃`.
    pub c_tilde: f64,
    /// Largest singular value of the unregularized `A`.
    pub sigma_max: f64,
    /// Evolution time of the inversion pass.
    pub t_evolution: f64,
    /// Evolution time of the multiplication pass (spectrum `±σ_j`).
    pub t_multiply: f64,
}

impl HhlConfig {
    /// Constants read off the exact spectrum. The evolution times put the
    /// largest eigenvalue of each pass at a quarter turn.
    pub fn from_extended(ext: &ExtendedMatrix, n_phase_bits: usize) -> Result<Self, HhlError> {
        let c_tilde = ext.extended_sigma_min();
        if !c_tilde.is_finite() {
            return Err(HhlError::InvalidConfig(
                "extended matrix has no nonzero singular value".into(),
            ));
        }
        let sigma_max = ext.sigma_max();
        let t_evolution = PI / (2.0 * ext.extended_sigma_max());
        let t_multiply = if sigma_max > 0.0 {
            PI / (2.0 * sigma_max)
        } else {
            t_evolution
        };
        Ok(Self {
            n_phase_bits,
            c_tilde,
            sigma_max,
            t_evolution,
            t_multiply,
        })
    }

    /// Both passes read eigenvalues on the grid `k * unit`, `|k| < 2^(n-1)`.
    /// Spectra made of multiples of `unit` are then resolved exactly.
    pub fn with_grid_unit(
        ext: &ExtendedMatrix,
        n_phase_bits: usize,
        unit: f64,
    ) -> Result<Self, HhlError> {
        let mut cfg = Self::from_extended(ext, n_phase_bits)?;
        let t = 2.0 * PI / ((1u64 << n_phase_bits) as f64 * unit);
        cfg.t_evolution = t;
        cfg.t_multiply = t;
        Ok(cfg)
    }

    /// `C = C̃ / σ_max`, the good-branch scale of the multiplied state.
    pub fn multiplied_scale(&self) -> f64 {
        self.c_tilde / self.sigma_max
    }

    /// Balancing factor `t = min(1, C)` of the residual construction.
    pub fn residual_balance(&self) -> f64 {
        self.multiplied_scale().min(1.0)
    }

    /// Eigenvalue spacing the phase register can distinguish in the
    /// inversion pass.
    pub fn resolution(&self) -> f64 {
        2.0 * PI / ((1u64 << self.n_phase_bits) as f64 * self.t_evolution)
    }

    /// The eigenvalue read from phase outcome `y` of a pass with time `t`.
    pub fn eigenvalue_of(&self, y: usize, t: f64) -> f64 {
        let signed = crate::sim::signed_register(y, self.n_phase_bits);
        -2.0 * PI * signed as f64 / ((1u64 << self.n_phase_bits) as f64 * t)
    }

    /// Checks the constants against the spectrum of `ext`.
    pub fn validate(&self, ext: &ExtendedMatrix) -> Result<(), HhlError> {
        if self.n_phase_bits < 2 || self.n_phase_bits > 20 {
            return Err(HhlError::InvalidConfig(format!(
                "phase bits must be in 2..=20, got {}",
                self.n_phase_bits
            )));
        }
        for (name, v) in [
            ("c_tilde", self.c_tilde),
            ("sigma_max", self.sigma_max),
            ("t_evolution", self.t_evolution),
            ("t_multiply", self.t_multiply),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(HhlError::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        let sigma_min = ext.extended_sigma_min();
        if self.c_tilde > sigma_min * (1.0 + 1e-12) {
            return Err(HhlError::RotationConstant {
                c_tilde: self.c_tilde,
                sigma_min,
            });
        }
        check_pass(
            &ext.extended_singular_values(),
            self.t_evolution,
            self.n_phase_bits,
        )?;
        check_pass(&ext.sigma, self.t_multiply, self.n_phase_bits)
    }
}

/// The spectrum `{±s_j} ∪ {0}` must fit in `(-π, π)` after scaling by `t`
/// and its distinct values must sit at least one grid cell apart.
fn check_pass(singular: &[f64], t: f64, bits: usize) -> Result<(), HhlError> {
    let top = singular.iter().copied().fold(0.0, f64::max);
    // the most negative readable eigenvalue is -π/t, the most positive just below π/t
    if top * t >= PI * (1.0 - 1e-12) {
        return Err(HhlError::EvolutionRange { lambda: top, t });
    }
    let cutoff = RANK_TOLERANCE * top.max(1e-300);
    let mut values: Vec<f64> = vec![0.0];
    for &s in singular.iter().filter(|&&s| s > cutoff) {
        values.push(s);
        values.push(-s);
    }
    values.sort_by(f64::total_cmp);
    values.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * top.max(1.0));
    let min_gap = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let resolution = 2.0 * PI / ((1u64 << bits) as f64 * t);
    if min_gap < resolution * (1.0 - 1e-9) {
        return Err(HhlError::PhaseResolution {
            bits,
            resolution,
            min_gap,
        });
    }
    Ok(())
}
