use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::{grover_plane, AmplitudeError, StatePrep};
use crate::sim::{phase_estimation, register_marginal, sample_index, StateVector, MAX_QUBITS};

/// One measured amplitude-estimation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeEstimate {
    /// Folded angle in `[0, π/2]`.
    pub theta_tilde: f64,
    pub n_bits: usize,
    pub raw_register: usize,
    /// `sin²θ̃`, the estimated mass of the bad part.
    pub probability_estimate: f64,
    /// Controlled Grover applications, `2^n - 1`.
    pub queries: u64,
}

impl AmplitudeEstimate {
    pub fn from_register(y: usize, n_bits: usize) -> Self {
        let theta_tilde = fold_register(y, n_bits);
        Self {
            theta_tilde,
            n_bits,
            raw_register: y,
            probability_estimate: theta_tilde.sin().powi(2),
            queries: (1u64 << n_bits) - 1,
        }
    }

    /// Estimated good amplitude `cos θ̃`.
    pub fn amplitude(&self) -> f64 {
        self.theta_tilde.cos().max(0.0)
    }
}

/// `min(y, 2^n - y) π / 2^n`: the two eigenphases `±2θ` give the same angle.
pub fn fold_register(y: usize, n_bits: usize) -> f64 {
    let n = 1usize << n_bits;
    let y = y % n;
    y.min(n - y) as f64 * PI / n as f64
}

/// Phase bits for additive accuracy `epsilon` on the angle (and thus on
/// the amplitude), with two spare bits for the success probability.
pub fn bits_for_accuracy(epsilon: f64) -> Result<usize, AmplitudeError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(AmplitudeError::InvalidAccuracy(epsilon));
    }
    Ok((PI / epsilon).log2().ceil() as usize + 2)
}

pub(crate) fn check_bits(n_bits: usize) -> Result<(), AmplitudeError> {
    // one extra qubit holds the Grover plane
    if n_bits == 0 || n_bits + 1 > MAX_QUBITS {
        return Err(AmplitudeError::InvalidBits {
            bits: n_bits,
            max: MAX_QUBITS - 1,
        });
    }
    Ok(())
}

/// Plane-reduced phase estimation: amplitudes over `[register][plane]`.
pub(crate) fn plane_qpe(
    prep: &StatePrep,
    n_bits: usize,
) -> Result<(super::GroverPlane, Vec<Complex64>), AmplitudeError> {
    check_bits(n_bits)?;
    let plane = grover_plane(prep)?;
    let out = phase_estimation(&plane.op, &StateVector::basis(1, 0)?, n_bits)?;
    Ok((plane, out.into_amplitudes()))
}

/// Exact distribution of the raw phase register.
pub fn theta_distribution(prep: &StatePrep, n_bits: usize) -> Result<Vec<f64>, AmplitudeError> {
    let (_, amps) = plane_qpe(prep, n_bits)?;
    Ok(register_marginal(&amps, n_bits))
}

/// Distribution over folded outcomes `0..=2^(n-1)`; entry `k` is the
/// probability of reading `θ̃ = kπ/2^n`.
pub fn folded_distribution(prep: &StatePrep, n_bits: usize) -> Result<Vec<f64>, AmplitudeError> {
    let raw = theta_distribution(prep, n_bits)?;
    let n = raw.len();
    let mut folded = vec![0.0; n / 2 + 1];
    for (y, p) in raw.into_iter().enumerate() {
        folded[y.min(n - y)] += p;
    }
    Ok(folded)
}

/// Runs amplitude estimation once and measures the phase register.
pub fn estimate_theta<R: Rng + ?Sized>(
    prep: &StatePrep,
    n_bits: usize,
    rng: &mut R,
) -> Result<AmplitudeEstimate, AmplitudeError> {
    let dist = theta_distribution(prep, n_bits)?;
    Ok(AmplitudeEstimate::from_register(
        sample_index(&dist, rng),
        n_bits,
    ))
}

/// Median of `repetitions` independent runs; the reported query count is
/// the total over all runs.
pub fn estimate_theta_median<R: Rng + ?Sized>(
    prep: &StatePrep,
    n_bits: usize,
    repetitions: usize,
    rng: &mut R,
) -> Result<AmplitudeEstimate, AmplitudeError> {
    if repetitions.is_multiple_of(2) {
        return Err(AmplitudeError::EvenRepetitions(repetitions));
    }
    let dist = theta_distribution(prep, n_bits)?;
    let mut runs: Vec<AmplitudeEstimate> = (0..repetitions)
        .map(|_| AmplitudeEstimate::from_register(sample_index(&dist, rng), n_bits))
        .collect();
    runs.sort_by(|a, b| a.theta_tilde.total_cmp(&b.theta_tilde));
    let mut median = runs[repetitions / 2];
    median.queries *= repetitions as u64;
    Ok(median)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::GroverOperator;
    use crate::sim::{gates, qpe_forward_in_place};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn prep_for(theta: f64) -> StatePrep {
        StatePrep::from_unitary(gates::rotation(theta), 0).unwrap()
    }

    #[test]
    fn extreme_angles_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let all_bad = prep_for(PI / 2.0);
        let e = estimate_theta(&all_bad, 4, &mut rng).unwrap();
        assert!((e.theta_tilde - PI / 2.0).abs() < 1e-15);
        assert!((e.probability_estimate - 1.0).abs() < 1e-15);
        let all_good = prep_for(0.0);
        let e = estimate_theta(&all_good, 4, &mut rng).unwrap();
        assert_eq!(e.theta_tilde, 0.0);
        assert_eq!(e.queries, 15);
    }

    #[test]
    fn sin_point_six_success_rate() {
        let theta = 0.6f64.asin();
        let prep = prep_for(theta);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let hits = (0..100)
            .filter(|_| {
                (estimate_theta(&prep, 8, &mut rng).unwrap().theta_tilde - theta).abs()
                    <= PI / 256.0
            })
            .count();
        assert!(hits >= 80, "{hits}");
        // the exact success probability behind the sampling
        let folded = folded_distribution(&prep, 8).unwrap();
        let exact: f64 = folded
            .iter()
            .enumerate()
            .filter(|(k, _)| (*k as f64 * PI / 256.0 - theta).abs() <= PI / 256.0)
            .map(|(_, p)| p)
            .sum();
        assert!(exact >= 8.0 / (PI * PI));
    }

    #[test]
    fn plane_reduction_matches_full_circuit() {
        let s = StateVector::normalized(
            (0..8)
                .map(|i| Complex64::new(1.0 + i as f64, (i as f64).sin()))
                .collect(),
        )
        .unwrap();
        let prep = StatePrep::from_state(s, vec![1]).unwrap();
        let n = 5;
        let g = GroverOperator::new(&prep);
        let mut amps = vec![Complex64::new(0.0, 0.0); 8 << n];
        amps[..8].copy_from_slice(prep.state().amplitudes());
        qpe_forward_in_place(&mut amps, n, &g).unwrap();
        let full = register_marginal(&amps, n);
        let reduced = theta_distribution(&prep, n).unwrap();
        for (a, b) in full.iter().zip(&reduced) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn folding_is_symmetric() {
        for n in 1..6 {
            for y in 0..(1usize << n) {
                assert_eq!(fold_register(y, n), fold_register((1 << n) - y, n));
                assert!(fold_register(y, n) <= PI / 2.0);
            }
        }
    }

    #[test]
    fn bits_for_accuracy_values() {
        assert_eq!(bits_for_accuracy(0.05).unwrap(), 8);
        assert_eq!(bits_for_accuracy(1.0).unwrap(), 4);
        assert!(bits_for_accuracy(0.0).is_err());
    }

    #[test]
    fn median_mode() {
        let prep = prep_for(0.4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e = estimate_theta_median(&prep, 7, 5, &mut rng).unwrap();
        assert!((e.theta_tilde - 0.4).abs() <= PI / 128.0);
        assert_eq!(e.queries, 5 * 127);
        assert!(matches!(
            estimate_theta_median(&prep, 7, 4, &mut rng),
            Err(AmplitudeError::EvenRepetitions(4))
        ));
    }
}
