use rand::Rng;

use super::branches::{
    check_epsilon, prepare_branches, realized_medians, register_scale, restarted_search,
    shared_bits,
};
use super::classical::lcurve_criterion;
use super::{LCurvePoint, ParameterGrid, PipelineOptions, SearchError, SelectionResult};
use crate::hhl::{residual_prep, solution_prep};
use crate::linalg::RegularizedProblem;

/// Quantum L-curve selection.
///
/// Every grid point gets its own solution and residual state. Amplitude
/// estimation writes `‖x_j‖` and `‖A x_j - b‖` into function registers in
/// superposition over `j`, each divided by a per-branch power of two so it
/// fills the register without saturating. The realized register values form
/// `(‖r_j‖ - shift.residual)² + (‖x_j‖ - shift.solution)²` and Dürr–Høyer
/// minimum finding picks the index. Norms are accurate to `epsilon ‖b‖`.
pub fn lcurve_pipeline<R: Rng + ?Sized>(
    problem: &RegularizedProblem,
    grid: &ParameterGrid,
    opts: &PipelineOptions,
    epsilon: f64,
    rng: &mut R,
) -> Result<SelectionResult, SearchError> {
    check_epsilon(epsilon)?;
    let branches = prepare_branches(problem, grid, opts)?;
    let b = &problem.b;
    let b_norm = b.norm();

    let mut x_preps = Vec::with_capacity(branches.len());
    let mut r_preps = Vec::with_capacity(branches.len());
    for br in &branches {
        let wrap = |source| SearchError::Branch { mu: br.mu, source };
        x_preps.push(solution_prep(&br.ext, b, &br.cfg).map_err(wrap)?);
        r_preps.push(residual_prep(&br.ext, b, &br.cfg).map_err(wrap)?);
    }

    let n_x = shared_bits(branches.iter().map(|br| br.cfg.c_tilde * epsilon))?;
    let n_r = shared_bits(
        branches
            .iter()
            .map(|br| br.cfg.residual_balance() * epsilon / 2.0),
    )?;
    let s_x: Vec<f64> = branches
        .iter()
        .map(|br| register_scale(1.0 / br.cfg.c_tilde))
        .collect();
    let s_r: Vec<f64> = branches
        .iter()
        .map(|br| register_scale(2.0 / br.cfg.residual_balance()))
        .collect();

    let fx: Vec<Box<dyn Fn(f64) -> f64>> = branches
        .iter()
        .zip(&s_x)
        .map(|(br, &s)| {
            let c = br.cfg.c_tilde;
            Box::new(move |a: f64| a / (c * s)) as Box<dyn Fn(f64) -> f64>
        })
        .collect();
    let fr: Vec<Box<dyn Fn(f64) -> f64>> = branches
        .iter()
        .zip(&s_r)
        .map(|(br, &s)| {
            let t = br.cfg.residual_balance();
            Box::new(move |a: f64| 2.0 * a / (t * s)) as Box<dyn Fn(f64) -> f64>
        })
        .collect();
    let xs = realized_medians(&x_preps, &fx, n_x, opts.repetitions, rng)?;
    let rs = realized_medians(&r_preps, &fr, n_r, opts.repetitions, rng)?;

    let lcurve: Vec<LCurvePoint> = (0..branches.len())
        .map(|j| LCurvePoint {
            mu: branches[j].mu,
            residual_norm: s_r[j] * rs[j] * b_norm,
            solution_norm: s_x[j] * xs[j] * b_norm,
        })
        .collect();
    let values: Vec<f64> = lcurve
        .iter()
        .map(|pt| lcurve_criterion(pt.residual_norm, pt.solution_norm, opts.shift))
        .collect();
    let search = restarted_search(&values, opts.search_restarts, rng);
    let per_run = ((1u64 << n_x) - 1) + ((1u64 << n_r) - 1);
    Ok(SelectionResult {
        chosen_index: search.index,
        chosen_mu: grid.mus[search.index],
        criterion_values: values,
        queries_used: search.queries_used,
        threshold_history: search.threshold_history,
        estimation_queries: per_run * opts.repetitions as u64,
        lcurve,
        gcv: Vec::new(),
        singular_values: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hhl::{estimate_residual_norm, estimate_solution_norm, HhlConfig};
    use crate::linalg::{build_extended, real_diagonal, real_vector};
    use crate::search::{classical_select, Criterion, LCurveShift};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_point_matches_standalone_estimators() {
        let problem =
            RegularizedProblem::new(real_diagonal(&[1.0, 0.5]), real_vector(&[1.0, 0.0])).unwrap();
        let grid = ParameterGrid::from_values(vec![0.5]).unwrap();
        let opts = PipelineOptions {
            n_phase_bits: 6,
            repetitions: 1,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sel = lcurve_pipeline(&problem, &grid, &opts, 0.05, &mut rng).unwrap();
        assert_eq!((sel.chosen_index, sel.queries_used), (0, 0));
        let pt = sel.lcurve[0];
        let ext = build_extended(&problem.a, 0.5).unwrap();
        let cfg = HhlConfig::from_extended(&ext, 6).unwrap();
        let x = estimate_solution_norm(&ext, &problem.b, &cfg, 0.05, &mut rng).unwrap();
        let r = estimate_residual_norm(&ext, &problem.b, &cfg, 0.05, &mut rng).unwrap();
        assert!(
            (pt.solution_norm - 0.8).abs() <= 0.05 && (x.value - 0.8).abs() <= 0.05,
            "{pt:?} {x:?}"
        );
        assert!(
            (pt.residual_norm - 0.2).abs() <= 0.05 && (r.value - 0.2).abs() <= 0.05,
            "{pt:?} {r:?}"
        );
    }

    #[test]
    fn agrees_with_classical_within_a_step() {
        let problem = RegularizedProblem::new(
            real_diagonal(&[1.0, 0.5, 0.05]),
            real_vector(&[0.9, 0.45, 0.06]),
        )
        .unwrap();
        let grid = ParameterGrid::new(1.0, 0.6, 5).unwrap();
        let oracle = classical_select(
            &problem,
            &grid,
            Criterion::LCurveSum(LCurveShift::default()),
        )
        .unwrap();
        let opts = PipelineOptions {
            n_phase_bits: 8,
            max_phase_bits: 10,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let sel = lcurve_pipeline(&problem, &grid, &opts, 0.02, &mut rng).unwrap();
        assert!(
            sel.chosen_index.abs_diff(oracle.chosen_index) <= 1,
            "{sel:?} vs {oracle:?}"
        );
        for (q, c) in sel.lcurve.iter().zip(&oracle.lcurve) {
            assert!(
                (q.solution_norm - c.solution_norm).abs() < 0.1,
                "{q:?} {c:?}"
            );
            assert!(
                (q.residual_norm - c.residual_norm).abs() < 0.1,
                "{q:?} {c:?}"
            );
        }
    }
}
