//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero when any fails. Criteria run on separate threads.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use quantum_tikhonov::amplitude::{folded_distribution, StatePrep};
use quantum_tikhonov::hhl::{
    estimate_residual_norm, estimate_solution_norm, hhl_solution_state, HhlConfig,
};
use quantum_tikhonov::io::{generate_problem, run, Method, ProblemKind, ProblemSource, RunConfig};
use quantum_tikhonov::linalg::{
    build_extended, compute_svd, condition_number_mu, filtered_solve, real_diagonal, real_vector,
    tikhonov_solve, tsvd_solve, CMatrix, CVector, RegularizedProblem,
};
use quantum_tikhonov::search::{
    classical_select, durr_hoyer_budget, durr_hoyer_min, gcv_pipeline, lcurve_pipeline,
    principal_singular_values, Criterion, LCurveShift, ParameterGrid, PipelineOptions,
    SelectionResult,
};
use quantum_tikhonov::sim::{gates, phase_estimation, register_marginal, StateVector, UnitaryOp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

fn gaussian_vector(len: usize, rng: &mut ChaCha8Rng) -> CVector {
    CVector::from_fn(len, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Real orthogonal `rows x cols` block from the QR factor of a Gaussian matrix.
fn orthonormal_columns(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = DMatrix::<f64>::from_fn(rows, rows, |_, _| rng.sample(StandardNormal));
    let q = g.qr().q();
    q.columns(0, cols).map(|v| Complex64::new(v, 0.0))
}

fn stacked_condition(a: &CMatrix, mu: f64) -> f64 {
    let (m, n) = a.shape();
    let mut s = CMatrix::zeros(m + n, n);
    s.view_mut((0, 0), (m, n)).copy_from(a);
    for i in 0..n {
        s[(m + i, i)] = Complex64::new(mu, 0.0);
    }
    let sv = s.singular_values();
    sv.max() / sv.min()
}

fn c1_condition_numbers() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for deficient in [false, true] {
        for _ in 0..100 {
            let m = rng.random_range(2..=6);
            let n = rng.random_range(2..=m);
            let a = if deficient {
                let r = rng.random_range(1..n);
                gaussian_matrix(m, r, &mut rng) * gaussian_matrix(r, n, &mut rng)
            } else {
                gaussian_matrix(m, n, &mut rng)
            };
            let mu = rng.random_range(0.05..2.0);
            let svd = compute_svd(&a).map_err(|e| e.to_string())?;
            check(
                svd.is_full_column_rank() != deficient,
                format!("rank case mislabelled for {a}"),
            )?;
            let kappa = condition_number_mu(&svd, mu).map_err(|e| e.to_string())?;
            let explicit = stacked_condition(&a, mu);
            let rel = (kappa - explicit).abs() / explicit;
            worst = worst.max(rel);
            check(
                rel <= 1e-8,
                format!("kappa {kappa} vs stacked {explicit} (rank deficient: {deficient})"),
            )?;
        }
    }
    let k1 = condition_number_mu(
        &compute_svd(&real_diagonal(&[1.0, 0.5, 0.1, 0.01])).unwrap(),
        0.1,
    )
    .unwrap();
    check(
        (k1 - 10.0).abs() <= 1e-8 * 10.0,
        format!("full-rank checkpoint {k1}"),
    )?;
    let k2 = condition_number_mu(&compute_svd(&real_diagonal(&[1.0, 0.0])).unwrap(), 0.5).unwrap();
    check(
        (k2 - 5f64.sqrt()).abs() <= 1e-8 * 5f64.sqrt(),
        format!("rank-deficient checkpoint {k2}"),
    )?;
    Ok(format!(
        "200 problems, worst relative error {worst:.1e}; checkpoints 10 and sqrt 5"
    ))
}

fn c2_tsvd_bridge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..50 {
        let m = rng.random_range(1..=6);
        let n = rng.random_range(1..=6);
        let a = gaussian_matrix(m, n, &mut rng);
        let b = gaussian_vector(m, &mut rng);
        let svd = compute_svd(&a).map_err(|e| e.to_string())?;
        let k = rng.random_range(1..=svd.numerical_rank());
        let tsvd = tsvd_solve(&svd, &b, k).map_err(|e| e.to_string())?;
        let filters: Vec<f64> = (0..svd.sigma.len())
            .map(|i| if i < k { 1.0 } else { 0.0 })
            .collect();
        let overridden = filtered_solve(&svd, &b, &filters, 0.0).map_err(|e| e.to_string())?;
        let same_bits = tsvd
            .x
            .iter()
            .zip(overridden.x.iter())
            .all(|(p, q)| p.re.to_bits() == q.re.to_bits() && p.im.to_bits() == q.im.to_bits());
        check(
            same_bits,
            format!("tsvd and overridden filters differ at k = {k}"),
        )?;
        // independent term-by-term sum
        let mut direct = CVector::zeros(n);
        for i in 0..k {
            let coeff = svd.u.column(i).dotc(&b) / Complex64::new(svd.sigma[i], 0.0);
            direct += svd.v.column(i) * coeff;
        }
        check(
            (&direct - &tsvd.x).norm() <= 1e-10 * (1.0 + direct.norm()),
            "tsvd departs from direct sum",
        )?;
    }
    Ok("50 problems bitwise equal".into())
}

fn c3_qpe_dyadic() -> Outcome {
    let mut cases = 0;
    for n in 1..=5usize {
        for y in 0..(1usize << n) {
            let phase = 2.0 * PI * y as f64 / (1u64 << n) as f64;
            let op = UnitaryOp::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                Complex64::new(1.0, 0.0),
                Complex64::from_polar(1.0, phase),
            ])))
            .map_err(|e| e.to_string())?;
            // conjugate by a Hadamard so the eigenvector is not a basis state
            let h = gates::hadamard();
            let op = h
                .compose(&op)
                .and_then(|o| o.compose(&h))
                .map_err(|e| e.to_string())?;
            let eigen = StateVector::from_amplitudes(vec![
                Complex64::new(1.0 / 2f64.sqrt(), 0.0),
                Complex64::new(-1.0 / 2f64.sqrt(), 0.0),
            ])
            .map_err(|e| e.to_string())?;
            let out = phase_estimation(&op, &eigen, n).map_err(|e| e.to_string())?;
            let p = register_marginal(out.amplitudes(), n)[y];
            check(
                (p - 1.0).abs() <= 1e-10,
                format!("n = {n}, y = {y}: probability {p}"),
            )?;
            cases += 1;
        }
    }
    Ok(format!("{cases} dyadic phases read with probability 1"))
}

fn c4_amplitude_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let bound = 4.0 / (PI * PI) - 1e-6;
    let mut lowest = f64::INFINITY;
    for _ in 0..100 {
        let theta: f64 = rng.random_range(0.0..PI / 2.0);
        let state = StateVector::from_amplitudes(vec![
            Complex64::new(theta.cos(), 0.0),
            Complex64::new(theta.sin(), 0.0),
        ])
        .map_err(|e| e.to_string())?;
        let prep = StatePrep::from_state(state, vec![0]).map_err(|e| e.to_string())?;
        let dist = folded_distribution(&prep, 8).map_err(|e| e.to_string())?;
        let (k, &p) = dist
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        let theta_tilde = k as f64 * PI / 256.0;
        check(
            (theta - theta_tilde).abs() <= PI / 256.0,
            format!("θ {theta} read as {theta_tilde}"),
        )?;
        check(p >= bound, format!("θ {theta}: top probability {p}"))?;
        lowest = lowest.min(p);
    }
    Ok(format!("100 angles, lowest top probability {lowest:.4}"))
}

fn c5_hhl_mass() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    // σ² + μ² lands on multiples of 0.05 squared: σ̃ = 1, 0.75, 0.65
    let spectrum = [0.8, 0.45, 0.25];
    let mu = 0.6;
    let mut worst: f64 = 0.0;
    for trial in 0..30 {
        let n = 1 + trial % 3;
        let m = n + rng.random_range(0..=1);
        let sigma: Vec<f64> = (0..n).map(|i| spectrum[(i + trial) % 3]).collect();
        let u = orthonormal_columns(m, n, &mut rng);
        let v = orthonormal_columns(n, n, &mut rng);
        let a: CMatrix = u * real_diagonal(&sigma) * v.adjoint();
        let b = gaussian_vector(m, &mut rng);
        let ext = build_extended(&a, mu).map_err(|e| e.to_string())?;
        let cfg = HhlConfig::with_grid_unit(&ext, 7, 0.05).map_err(|e| e.to_string())?;
        let state = hhl_solution_state(&ext, &b, &cfg).map_err(|e| e.to_string())?;
        let mass = state.marginal(&[0]).map_err(|e| e.to_string())?[0];
        let oracle = tikhonov_solve(&compute_svd(&a).unwrap(), &b, mu).unwrap();
        let expected = (cfg.c_tilde * oracle.solution_norm / b.norm()).powi(2);
        worst = worst.max((mass - expected).abs());
        check(
            (mass - expected).abs() <= 1e-8,
            format!("{m}x{n} σ {sigma:?}: mass {mass} vs {expected}"),
        )?;
    }
    let a = real_diagonal(&[1.0, 0.5]);
    let b = real_vector(&[1.0, 0.0]);
    let x = tikhonov_solve(&compute_svd(&a).unwrap(), &b, 0.5)
        .unwrap()
        .solution_norm;
    check(
        (x - 0.8).abs() <= 1e-12,
        format!("worked solution norm {x}"),
    )?;
    let ext = build_extended(&a, 0.5).unwrap();
    let cfg = HhlConfig::from_extended(&ext, 6).map_err(|e| e.to_string())?;
    let state = hhl_solution_state(&ext, &b, &cfg).map_err(|e| e.to_string())?;
    let mass = state.marginal(&[0]).unwrap()[0];
    check(
        (mass - (cfg.c_tilde * 0.8).powi(2)).abs() <= 1e-8,
        format!("worked mass {mass}"),
    )?;
    Ok(format!(
        "30 problems plus the 0.8 worked value, worst deviation {worst:.1e}"
    ))
}

fn c6_estimators() -> Outcome {
    let ext = build_extended(&real_diagonal(&[1.0, 0.5]), 0.5).unwrap();
    let b = real_vector(&[1.0, 0.0]);
    let cfg = HhlConfig::from_extended(&ext, 6).map_err(|e| e.to_string())?;
    let (mut xs, mut rs) = (0, 0);
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(600 + seed);
        let x =
            estimate_solution_norm(&ext, &b, &cfg, 0.05, &mut rng).map_err(|e| e.to_string())?;
        let r =
            estimate_residual_norm(&ext, &b, &cfg, 0.05, &mut rng).map_err(|e| e.to_string())?;
        xs += usize::from((x.value - 0.8).abs() <= 0.05);
        rs += usize::from((r.value - 0.2).abs() <= 0.05);
    }
    check(
        xs >= 80 && rs >= 80,
        format!("solution {xs}/100, residual {rs}/100"),
    )?;
    Ok(format!(
        "solution norm {xs}/100, residual norm {rs}/100 within 0.05"
    ))
}

fn c7_durr_hoyer() -> Outcome {
    let mut summary = Vec::new();
    for p in [4usize, 16, 64] {
        let budget = durr_hoyer_budget(p);
        let mut hits = 0;
        for seed in 0..200u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(7000 + seed + 1000 * p as u64);
            let values: Vec<f64> = (0..p).map(|_| rng.random::<f64>()).collect();
            let truth = (0..p)
                .min_by(|&i, &j| values[i].total_cmp(&values[j]))
                .unwrap();
            let found = durr_hoyer_min(&values, &mut rng);
            check(
                found.queries_used as f64 <= budget,
                format!(
                    "p = {p}: {} queries over budget {budget}",
                    found.queries_used
                ),
            )?;
            hits += usize::from(found.index == truth);
        }
        check(hits >= 100, format!("p = {p}: {hits}/200 successes"))?;
        summary.push(format!("p={p} {hits}/200"));
    }
    Ok(format!("budget held; {}", summary.join(", ")))
}

/// Worst change of the criterion caused by norm errors of `epsilon ‖b‖`,
/// compared with half the smallest gap to the classical minimum.
fn lcurve_in_regime(oracle: &SelectionResult, b_norm: f64, epsilon: f64) -> bool {
    let e = epsilon * b_norm;
    let delta = oracle
        .lcurve
        .iter()
        .map(|p| 2.0 * e * (p.solution_norm + p.residual_norm) + 2.0 * e * e)
        .fold(0.0, f64::max);
    delta < min_gap(oracle) / 2.0
}

/// As above for GCV, adding the denominator error from singular values
/// sampled on a grid of spacing `sv_step`.
fn gcv_in_regime(oracle: &SelectionResult, b_norm: f64, epsilon: f64, sv_step: f64) -> bool {
    let e = epsilon * b_norm;
    let delta = oracle
        .gcv
        .iter()
        .map(|g| {
            let mu2 = g.mu * g.mu;
            let dd: f64 = oracle
                .singular_values
                .iter()
                .map(|s| 2.0 * s * mu2 / (s * s + mu2).powi(2) * sv_step)
                .sum();
            (2.0 * e * g.residual_norm + e * e) / g.denominator.powi(2)
                + 2.0 * g.value * dd / g.denominator
        })
        .fold(0.0, f64::max);
    delta < min_gap(oracle) / 2.0
}

fn min_gap(oracle: &SelectionResult) -> f64 {
    let c = &oracle.criterion_values;
    let j0 = oracle.chosen_index;
    c.iter()
        .enumerate()
        .filter(|(j, _)| *j != j0)
        .map(|(_, v)| v - c[j0])
        .fold(f64::INFINITY, f64::min)
}

struct Tally {
    exact: usize,
    near: usize,
    runs: usize,
}

/// Runs `pipeline` on the first `wanted` seeds whose regime test equals
/// `in_regime`, counting exact and one-step agreement with the oracle.
fn agreement(
    wanted: usize,
    in_regime: bool,
    problem_of: &dyn Fn(u64) -> RegularizedProblem,
    oracle_of: &dyn Fn(&RegularizedProblem) -> SelectionResult,
    regime_of: &dyn Fn(&RegularizedProblem, &SelectionResult) -> bool,
    pipeline: &dyn Fn(&RegularizedProblem, u64) -> SelectionResult,
) -> Result<Tally, String> {
    let mut t = Tally {
        exact: 0,
        near: 0,
        runs: 0,
    };
    for seed in 0..400u64 {
        if t.runs == wanted {
            return Ok(t);
        }
        let problem = problem_of(seed);
        let oracle = oracle_of(&problem);
        if regime_of(&problem, &oracle) != in_regime {
            continue;
        }
        let sel = pipeline(&problem, seed);
        t.runs += 1;
        t.exact += usize::from(sel.chosen_index == oracle.chosen_index);
        t.near += usize::from(sel.chosen_index.abs_diff(oracle.chosen_index) <= 1);
    }
    Err(format!(
        "only {} seeded problems with regime = {in_regime}",
        t.runs
    ))
}

fn c8_pipelines() -> Outcome {
    let lcurve_problem =
        |seed| generate_problem(ProblemKind::GeometricSpectrum, 2, 2, 0.05, seed).unwrap();
    let lcurve_grid = ParameterGrid::new(2.0, 0.5, 6).unwrap();
    let lcurve_oracle = |p: &RegularizedProblem| {
        classical_select(
            p,
            &lcurve_grid,
            Criterion::LCurveSum(LCurveShift::default()),
        )
        .unwrap()
    };
    let lcurve_opts = PipelineOptions {
        n_phase_bits: 10,
        ..Default::default()
    };
    let (lg, lo) = (&lcurve_grid, &lcurve_opts);
    let lcurve_run = |eps: f64| {
        move |p: &RegularizedProblem, seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            lcurve_pipeline(p, lg, lo, eps, &mut rng).unwrap()
        }
    };

    let gcv_problem =
        |seed| generate_problem(ProblemKind::GeometricSpectrum, 4, 2, 0.3, seed).unwrap();
    let gcv_grid = ParameterGrid::new(2.0, 0.3, 6).unwrap();
    let gcv_oracle =
        |p: &RegularizedProblem| classical_select(p, &gcv_grid, Criterion::GcvLowRank(2)).unwrap();
    let gcv_opts = PipelineOptions {
        n_phase_bits: 10,
        sv_bits: 10,
        ..Default::default()
    };
    let sv_step = |p: &RegularizedProblem| 4.0 * p.a.norm() / (1u64 << gcv_opts.sv_bits) as f64;
    let (gg, go) = (&gcv_grid, &gcv_opts);
    let gcv_run = |eps: f64| {
        move |p: &RegularizedProblem, seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            gcv_pipeline(p, gg, 2, go, eps, &mut rng).unwrap()
        }
    };

    let (fine_l, fine_g, coarse) = (0.01, 0.004, 0.05);
    let l_in = agreement(
        20,
        true,
        &lcurve_problem,
        &lcurve_oracle,
        &|p, o| lcurve_in_regime(o, p.b.norm(), fine_l),
        &lcurve_run(fine_l),
    )?;
    let g_in = agreement(
        20,
        true,
        &gcv_problem,
        &gcv_oracle,
        &|p, o| gcv_in_regime(o, p.b.norm(), fine_g, sv_step(p)),
        &gcv_run(fine_g),
    )?;
    let l_out = agreement(
        20,
        false,
        &lcurve_problem,
        &lcurve_oracle,
        &|p, o| lcurve_in_regime(o, p.b.norm(), coarse),
        &lcurve_run(coarse),
    )?;
    let g_out = agreement(
        20,
        false,
        &gcv_problem,
        &gcv_oracle,
        &|p, o| gcv_in_regime(o, p.b.norm(), coarse, sv_step(p)),
        &gcv_run(coarse),
    )?;
    let report = format!(
        "in regime: lcurve {}/20, gcv {}/20 exact; outside: lcurve {}/20, gcv {}/20 within one step",
        l_in.exact, g_in.exact, l_out.near, g_out.near
    );
    check(l_in.exact == 20 && g_in.exact == 20, report.clone())?;
    check(
        l_out.near * 10 >= 7 * l_out.runs && g_out.near * 10 >= 7 * g_out.runs,
        report.clone(),
    )?;
    Ok(report)
}

fn c9_singular_values() -> Outcome {
    let (r, mu) = (2, 0.5);
    let weights = [1.0f64 + mu * mu, 0.25 + mu * mu];
    let shots = (10.0 * r as f64 * weights[0] / weights[1]).floor() as usize;
    let runs = 50;
    let mut hits = 0;
    for seed in 0..runs {
        let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
        let m = rng.random_range(2..=4);
        let u = orthonormal_columns(m, 2, &mut rng);
        let v = orthonormal_columns(2, 2, &mut rng);
        let a: CMatrix = u * real_diagonal(&[1.0, 0.5]) * v.adjoint();
        let ext = build_extended(&a, mu).unwrap();
        let Ok(s) = principal_singular_values(&ext, r, 8, shots, &mut rng) else {
            continue;
        };
        let ok = s
            .sigma
            .iter()
            .zip([1.0, 0.5])
            .all(|(est, t)| (est - t).abs() <= s.resolution)
            && s.sigma_tilde
                .iter()
                .zip(weights)
                .all(|(est, w)| (est - w.sqrt()).abs() <= s.resolution);
        hits += usize::from(ok);
    }
    check(
        hits * 10 >= 9 * runs as usize,
        format!("{hits}/{runs} runs recovered (1, 0.5)"),
    )?;
    Ok(format!(
        "{hits}/{runs} runs recovered (1, 0.5) with {shots} shots"
    ))
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    for method in [
        Method::Lcurve,
        Method::Gcv,
        Method::ClassicalGcv,
        Method::Tsvd,
    ] {
        let base = RunConfig {
            problem: ProblemSource::Generated {
                kind: ProblemKind::LowRank,
                m: 4,
                n: 3,
                noise: 0.05,
            },
            mu0: 1.0,
            rho: 0.7,
            p: 6,
            method,
            epsilon: 0.05,
            seed: 42,
            ..Default::default()
        };
        let mut outputs = Vec::new();
        for k in 0..2 {
            let path = dir.path().join(format!("{method}-{k}.jsonl"));
            let cfg = RunConfig {
                out: Some(path.clone()),
                ..base.clone()
            };
            let report = run(&cfg).map_err(|e| format!("{method}: {e}"))?;
            let file = std::fs::read(&path).map_err(|e| e.to_string())?;
            check(
                file == report.to_jsonl().as_bytes(),
                format!("{method}: file differs from report"),
            )?;
            outputs.push(file);
        }
        check(
            outputs[0] == outputs[1],
            format!("{method}: two runs differ"),
        )?;
        lines.push(method.to_string());
    }
    Ok(format!("byte-identical reports for {}", lines.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Check; 10] = [
        ("condition-number identities", c1_condition_numbers),
        ("tikhonov/tsvd bridge", c2_tsvd_bridge),
        ("qpe dyadic exactness", c3_qpe_dyadic),
        ("amplitude-estimation bound", c4_amplitude_bound),
        ("hhl good-branch mass", c5_hhl_mass),
        ("norm estimators", c6_estimators),
        ("durr-hoyer budget and success", c7_durr_hoyer),
        ("pipeline/oracle agreement", c8_pipelines),
        ("singular-value sampling", c9_singular_values),
        ("determinism", c10_determinism),
    ];
    let started = Instant::now();
    let results: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                s.spawn(move || {
                    let t = Instant::now();
                    let out =
                        std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (out, t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failures = 0;
    for (i, ((name, _), (outcome, secs))) in criteria.iter().zip(&results).enumerate() {
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({secs:.1}s)", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {msg} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failures,
        criteria.len(),
        started.elapsed().as_secs_f64()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
