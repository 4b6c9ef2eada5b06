use rand::Rng;

use super::{hhl_solution_state, residual_good_qubits, residual_state, HhlConfig, HhlError};
use crate::amplitude::{bits_for_accuracy, estimate_theta, StatePrep};
use crate::linalg::{CVector, ExtendedMatrix};

/// One norm read off an amplitude-estimation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    /// Estimated good amplitude the value was scaled from.
    pub amplitude: f64,
    pub n_bits: usize,
    pub queries: u64,
}

/// Both norms at one regularization parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimates {
    pub solution_norm: f64,
    pub residual_norm: f64,
    pub epsilon: f64,
    pub queries_used: u64,
}

/// The solution state as an amplitude-estimation input; the good branch is
/// the HHL flag at `|0>`, with amplitude `C̃ ‖x‖ / ‖b‖`.
pub fn solution_prep(
    ext: &ExtendedMatrix,
    b: &CVector,
    cfg: &HhlConfig,
) -> Result<StatePrep, HhlError> {
    Ok(StatePrep::from_state(
        hhl_solution_state(ext, b, cfg)?,
        vec![0],
    )?)
}

/// The residual state as an amplitude-estimation input; the good amplitude
/// is `(t/2) ‖A x - b‖ / ‖b‖`.
pub fn residual_prep(
    ext: &ExtendedMatrix,
    b: &CVector,
    cfg: &HhlConfig,
) -> Result<StatePrep, HhlError> {
    Ok(StatePrep::from_state(
        residual_state(ext, b, cfg)?,
        residual_good_qubits(cfg.n_phase_bits),
    )?)
}

fn check_epsilon(epsilon: f64) -> Result<(), HhlError> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(HhlError::InvalidAccuracy(epsilon))
    }
}

fn scaled_estimate<R: Rng + ?Sized>(
    prep: &StatePrep,
    amplitude_accuracy: f64,
    scale: f64,
    rng: &mut R,
) -> Result<NormEstimate, HhlError> {
    let n_bits = bits_for_accuracy(amplitude_accuracy.min(1.0))?;
    let est = estimate_theta(prep, n_bits, rng)?;
    Ok(NormEstimate {
        value: est.amplitude() * scale,
        amplitude: est.amplitude(),
        n_bits,
        queries: est.queries,
    })
}

/// `‖x_mu‖` to within `epsilon ‖b‖`: amplitude estimation at accuracy
/// `C̃ ε`, then division by `C̃`.
pub fn estimate_solution_norm<R: Rng + ?Sized>(
    ext: &ExtendedMatrix,
    b: &CVector,
    cfg: &HhlConfig,
    epsilon: f64,
    rng: &mut R,
) -> Result<NormEstimate, HhlError> {
    check_epsilon(epsilon)?;
    let prep = solution_prep(ext, b, cfg)?;
    scaled_estimate(&prep, cfg.c_tilde * epsilon, b.norm() / cfg.c_tilde, rng)
}

/// `‖A x_mu - b‖` to within `epsilon ‖b‖`: amplitude estimation at accuracy
/// `ε t / 2`, then scaling by `2 / t`.
pub fn estimate_residual_norm<R: Rng + ?Sized>(
    ext: &ExtendedMatrix,
    b: &CVector,
    cfg: &HhlConfig,
    epsilon: f64,
    rng: &mut R,
) -> Result<NormEstimate, HhlError> {
    check_epsilon(epsilon)?;
    let prep = residual_prep(ext, b, cfg)?;
    let t = cfg.residual_balance();
    scaled_estimate(&prep, epsilon * t / 2.0, 2.0 * b.norm() / t, rng)
}

pub fn estimate_norms<R: Rng + ?Sized>(
    ext: &ExtendedMatrix,
    b: &CVector,
    cfg: &HhlConfig,
    epsilon: f64,
    rng: &mut R,
) -> Result<NormEstimates, HhlError> {
    let x = estimate_solution_norm(ext, b, cfg, epsilon, rng)?;
    let r = estimate_residual_norm(ext, b, cfg, epsilon, rng)?;
    Ok(NormEstimates {
        solution_norm: x.value,
        residual_norm: r.value,
        epsilon,
        queries_used: x.queries + r.queries,
    })
}
