//! Amplitude estimation of `cos θ` for a two-qubit state whose good part
//! (first qubit `|0>`) has mass 0.6: the exact outcome distribution, single
//! runs, and the median-of-runs mode.

use num_complex::Complex64;
use quantum_tikhonov::amplitude::{
    bits_for_accuracy, estimate_theta, estimate_theta_median, folded_distribution, StatePrep,
};
use quantum_tikhonov::sim::StateVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let amps = [0.6f64, 0.24f64.sqrt(), 0.4f64.sqrt(), 0.0].map(|a| Complex64::new(a, 0.0));
    let state = StateVector::normalized(amps.to_vec())?;
    let prep = StatePrep::from_state(state, vec![0])?;
    println!(
        "good amplitude {:.5}, θ = {:.5}",
        prep.good_amplitude(),
        prep.theta()
    );

    let eps = 0.02;
    let n_bits = bits_for_accuracy(eps)?;
    let dist = folded_distribution(&prep, n_bits)?;
    let (k, p) = dist
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    println!("{n_bits} phase bits for ε = {eps}; most likely θ̃ = {k}π/2^{n_bits} with probability {p:.3}");

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let est = estimate_theta(&prep, n_bits, &mut rng)?;
        println!(
            "single run: cos θ̃ = {:.5} ({} queries)",
            est.amplitude(),
            est.queries
        );
    }
    let med = estimate_theta_median(&prep, n_bits, 7, &mut rng)?;
    println!(
        "median of 7: cos θ̃ = {:.5} ({} queries)",
        med.amplitude(),
        med.queries
    );
    Ok(())
}
