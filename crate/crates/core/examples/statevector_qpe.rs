//! Phase estimation of `exp(-iHt)` for a small Hermitian `H`. With `t`
//! chosen so the eigenvalues land on the phase grid, each eigenvector reads
//! out a single register value.

use std::f64::consts::PI;

use quantum_tikhonov::linalg::{real_matrix, real_vector};
use quantum_tikhonov::sim::{
    hamiltonian_evolution, phase_estimation, register_marginal, signed_register, StateVector,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // eigenvalues 3 and -1 with eigenvectors (1, 1)/√2 and (1, -1)/√2
    let h = real_matrix(2, 2, &[1.0, 2.0, 2.0, 1.0]);
    let n_bits = 4;
    let t = 2.0 * PI / (16.0 * 1.0); // one register step per unit of energy
    let u = hamiltonian_evolution(&h, t)?;
    let v = real_vector(&[1.0, 0.6]);
    let input = StateVector::normalized(v.iter().copied().collect())?;
    let out = phase_estimation(&u, &input, n_bits)?;
    let (plus, minus) = (
        (v[0] + v[1]).norm_sqr() / 2.0,
        (v[0] - v[1]).norm_sqr() / 2.0,
    );
    let total = plus + minus;
    println!(
        "expected weights: {:.4} on λ = 3, {:.4} on λ = -1",
        plus / total,
        minus / total
    );
    for (y, p) in register_marginal(out.amplitudes(), n_bits)
        .iter()
        .enumerate()
    {
        if *p > 1e-12 {
            let lambda = -(signed_register(y, n_bits) as f64) * 2.0 * PI / (16.0 * t);
            println!("register {y:>2}  probability {p:.4}  eigenvalue {lambda:+.3}");
        }
    }
    Ok(())
}
