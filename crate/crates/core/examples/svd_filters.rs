//! Exact regularization on a graded spectrum: filter factors, Tikhonov and
//! TSVD solutions, the extended-matrix condition number and GCV.

use quantum_tikhonov::linalg::{
    compute_svd, condition_number_mu, gcv_value, real_diagonal, real_vector, tikhonov_filters,
    tikhonov_solve, tsvd_solve,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = real_diagonal(&[1.0, 0.5, 0.1, 0.01]);
    let b = real_vector(&[1.0, 1.0, 1.0, 1.0]);
    let svd = compute_svd(&a)?;
    println!("singular values {:?}", svd.sigma);
    println!(
        "\n{:>8} {:>10} {:>10} {:>10} {:>10}  filters",
        "mu", "|x|", "|Ax-b|", "kappa_mu", "gcv"
    );
    for mu in [1.0, 0.3, 0.1, 0.03, 0.01] {
        let sol = tikhonov_solve(&svd, &b, mu)?;
        let kappa = condition_number_mu(&svd, mu)?;
        let gcv = gcv_value(&svd, &b, mu)?;
        let f: Vec<String> = tikhonov_filters(&svd, mu)
            .iter()
            .map(|f| format!("{f:.3}"))
            .collect();
        println!(
            "{mu:>8} {:>10.4} {:>10.4} {kappa:>10.3} {:>10.4}  [{}]",
            sol.solution_norm,
            sol.residual_norm,
            gcv.value,
            f.join(", ")
        );
    }
    println!("\n{:>8} {:>10} {:>10}", "k", "|x|", "|Ax-b|");
    for k in 1..=4 {
        let sol = tsvd_solve(&svd, &b, k)?;
        println!(
            "{k:>8} {:>10.4} {:>10.4}",
            sol.solution_norm, sol.residual_norm
        );
    }
    Ok(())
}
