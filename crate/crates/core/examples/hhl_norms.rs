//! Norm estimation through the regularized HHL circuit on `diag(1, 0.5)`,
//! `b = (1, 0)`, `mu = 0.5`, where `‖x‖ = 0.8` and `‖Ax - b‖ = 0.2`.

use quantum_tikhonov::hhl::{estimate_norms, hhl_solution_state, HhlConfig};
use quantum_tikhonov::linalg::{
    build_extended, compute_svd, real_diagonal, real_vector, tikhonov_solve,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = real_diagonal(&[1.0, 0.5]);
    let b = real_vector(&[1.0, 0.0]);
    let mu = 0.5;
    let exact = tikhonov_solve(&compute_svd(&a)?, &b, mu)?;
    let ext = build_extended(&a, mu)?;
    let cfg = HhlConfig::from_extended(&ext, 6)?;
    println!(
        "kappa_mu {:.4}, C̃ {:.4}, residual balance {:.4}",
        ext.kappa_mu,
        cfg.c_tilde,
        cfg.residual_balance()
    );

    let state = hhl_solution_state(&ext, &b, &cfg)?;
    let flag = state.marginal(&[0])?[0];
    println!(
        "flag |0> mass {flag:.6}; (C̃ ‖x‖ / ‖b‖)² = {:.6}",
        (cfg.c_tilde * exact.solution_norm / b.norm()).powi(2)
    );

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for eps in [0.1, 0.05, 0.01] {
        let est = estimate_norms(&ext, &b, &cfg, eps, &mut rng)?;
        println!(
            "ε = {eps:<5} ‖x‖ ≈ {:.4} (exact {:.4}), ‖Ax-b‖ ≈ {:.4} (exact {:.4}), {} queries",
            est.solution_norm,
            exact.solution_norm,
            est.residual_norm,
            exact.residual_norm,
            est.queries_used
        );
    }
    Ok(())
}
