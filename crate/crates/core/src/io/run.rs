use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    generate_problem_with, load_matrix, load_vector, GeneratorParams, IoError, ProblemKind,
};
use crate::linalg::{compute_svd, tikhonov_solve, tsvd_solve, RegularizedProblem};
use crate::search::{
    classical_select, gcv_pipeline, lcurve_pipeline, Criterion, ParameterGrid, PipelineOptions,
    SelectionResult,
};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Lcurve,
    Gcv,
    ClassicalLcurve,
    ClassicalGcv,
    /// Exact Tikhonov norms over the grid, no selection.
    Tikhonov,
    /// Exact truncated-SVD norms for every truncation index, no selection.
    Tsvd,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "lcurve" => Self::Lcurve,
            "gcv" => Self::Gcv,
            "classical-lcurve" => Self::ClassicalLcurve,
            "classical-gcv" => Self::ClassicalGcv,
            "tikhonov" => Self::Tikhonov,
            "tsvd" => Self::Tsvd,
            other => {
                return Err(Error::Usage(format!(
                    "unknown method '{other}' (expected lcurve, gcv, classical-lcurve, classical-gcv, tikhonov or tsvd)"
                )))
            }
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Lcurve => "lcurve",
            Self::Gcv => "gcv",
            Self::ClassicalLcurve => "classical-lcurve",
            Self::ClassicalGcv => "classical-gcv",
            Self::Tikhonov => "tikhonov",
            Self::Tsvd => "tsvd",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum ProblemSource {
    Generated {
        kind: ProblemKind,
        m: usize,
        n: usize,
        noise: f64,
    },
    Files {
        matrix: PathBuf,
        rhs: PathBuf,
    },
}

/// Everything a run depends on. Equal configs give byte-identical reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub problem: ProblemSource,
    pub mu0: f64,
    pub rho: f64,
    pub p: usize,
    pub method: Method,
    pub epsilon: f64,
    pub n_phase_bits: usize,
    /// GCV rank, also the rank of the low-rank generator.
    pub rank: usize,
    pub seed: u64,
    /// Report destination; not part of the echoed config.
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: ProblemSource::Generated {
                kind: ProblemKind::GeometricSpectrum,
                m: 6,
                n: 4,
                noise: 1e-2,
            },
            mu0: 1.0,
            rho: 0.9,
            p: 16,
            method: Method::Lcurve,
            epsilon: 0.05,
            n_phase_bits: 8,
            rank: 2,
            seed: 0,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), Error> {
        let usage = |msg: String| Err(Error::Usage(msg));
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return usage(format!("--rho must lie in (0, 1), got {}", self.rho));
        }
        if !(self.mu0 > 0.0 && self.mu0.is_finite()) {
            return usage(format!("--mu0 must be positive, got {}", self.mu0));
        }
        if self.p == 0 {
            return usage("--p must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return usage(format!("--epsilon must be positive, got {}", self.epsilon));
        }
        if !(2..=20).contains(&self.n_phase_bits) {
            return usage(format!(
                "--phase-bits must lie in 2..=20, got {}",
                self.n_phase_bits
            ));
        }
        if self.rank == 0 {
            return usage("--rank must be at least 1".into());
        }
        if let ProblemSource::Generated { m, n, noise, .. } = self.problem {
            if m == 0 || n == 0 {
                return usage(format!("--m and --n must be positive, got {m}x{n}"));
            }
            if !(noise >= 0.0 && noise.is_finite()) {
                return usage(format!("--noise must be nonnegative, got {noise}"));
            }
        }
        Ok(())
    }

    pub fn load_problem(&self) -> Result<RegularizedProblem, Error> {
        Ok(match &self.problem {
            ProblemSource::Generated { kind, m, n, noise } => {
                let params = GeneratorParams {
                    rank: self.rank.min(*m).min(*n),
                    ..Default::default()
                };
                generate_problem_with(*kind, *m, *n, *noise, self.seed, &params)?
            }
            ProblemSource::Files { matrix, rhs } => {
                let a = load_matrix(matrix)?;
                let b = load_vector(rhs)?;
                RegularizedProblem::new(a, b).map_err(IoError::from)?
            }
        })
    }
}

/// One row of the per-parameter table. Estimated columns are empty for the
/// exact methods; oracle columns are always filled.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub index: usize,
    pub mu: Option<f64>,
    /// Truncation index of the TSVD table.
    pub truncation: Option<usize>,
    pub solution_norm: Option<f64>,
    pub residual_norm: Option<f64>,
    pub gcv: Option<f64>,
    pub gcv_denominator: Option<f64>,
    pub flagged: bool,
    pub criterion: Option<f64>,
    pub oracle_solution_norm: f64,
    pub oracle_residual_norm: f64,
    pub oracle_gcv: Option<f64>,
    pub oracle_criterion: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub method: Method,
    pub points: usize,
    pub chosen_index: Option<usize>,
    pub chosen_mu: Option<f64>,
    pub criterion_value: Option<f64>,
    pub oracle_chosen_index: Option<usize>,
    pub oracle_chosen_mu: Option<f64>,
    pub queries_used: u64,
    pub estimation_queries: u64,
    pub threshold_history: Vec<usize>,
    pub singular_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub config: RunConfig,
    pub points: Vec<PointRecord>,
    pub summary: Summary,
    /// Logged, never written, so reports stay byte-comparable.
    pub wall_time: Duration,
}

#[derive(Serialize)]
struct Tagged<'a, T> {
    record: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

fn line<T: Serialize>(record: &'static str, body: &T) -> String {
    serde_json::to_string(&Tagged { record, body }).expect("report records serialize")
}

impl RunReport {
    /// One JSON object per line: `config`, then one `point` per row, then
    /// `summary`.
    pub fn to_jsonl(&self) -> String {
        let mut out = line("config", &self.config);
        out.push('\n');
        for p in &self.points {
            out.push_str(&line("point", p));
            out.push('\n');
        }
        out.push_str(&line("summary", &self.summary));
        out.push('\n');
        out
    }
}

fn empty_point(index: usize) -> PointRecord {
    PointRecord {
        index,
        mu: None,
        truncation: None,
        solution_norm: None,
        residual_norm: None,
        gcv: None,
        gcv_denominator: None,
        flagged: false,
        criterion: None,
        oracle_solution_norm: 0.0,
        oracle_residual_norm: 0.0,
        oracle_gcv: None,
        oracle_criterion: None,
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn selection_table(
    estimate: Option<&SelectionResult>,
    oracle: &SelectionResult,
) -> Vec<PointRecord> {
    (0..oracle.criterion_values.len())
        .map(|j| {
            let mut pt = empty_point(j);
            let o = &oracle.lcurve[j];
            pt.mu = Some(o.mu);
            pt.oracle_solution_norm = o.solution_norm;
            pt.oracle_residual_norm = o.residual_norm;
            pt.oracle_criterion = finite(oracle.criterion_values[j]);
            pt.oracle_gcv = oracle.gcv.get(j).and_then(|g| finite(g.value));
            if let Some(est) = estimate {
                pt.criterion = finite(est.criterion_values[j]);
                if let Some(l) = est.lcurve.get(j) {
                    pt.solution_norm = Some(l.solution_norm);
                    pt.residual_norm = Some(l.residual_norm);
                }
                if let Some(g) = est.gcv.get(j) {
                    pt.residual_norm = Some(g.residual_norm);
                    pt.gcv = finite(g.value);
                    pt.gcv_denominator = Some(g.denominator);
                    pt.flagged = g.flagged;
                }
            } else if let Some(g) = oracle.gcv.get(j) {
                pt.gcv_denominator = Some(g.denominator);
                pt.flagged = g.flagged;
            }
            pt
        })
        .collect()
}

fn selection_summary(
    method: Method,
    estimate: Option<&SelectionResult>,
    oracle: &SelectionResult,
) -> Summary {
    let chosen = estimate.unwrap_or(oracle);
    Summary {
        method,
        points: oracle.criterion_values.len(),
        chosen_index: Some(chosen.chosen_index),
        chosen_mu: Some(chosen.chosen_mu),
        criterion_value: finite(chosen.criterion_values[chosen.chosen_index]),
        oracle_chosen_index: Some(oracle.chosen_index),
        oracle_chosen_mu: Some(oracle.chosen_mu),
        queries_used: chosen.queries_used,
        estimation_queries: chosen.estimation_queries,
        threshold_history: chosen.threshold_history.clone(),
        singular_values: chosen.singular_values.clone(),
    }
}

fn table_summary(method: Method, points: usize) -> Summary {
    Summary {
        method,
        points,
        chosen_index: None,
        chosen_mu: None,
        criterion_value: None,
        oracle_chosen_index: None,
        oracle_chosen_mu: None,
        queries_used: 0,
        estimation_queries: 0,
        threshold_history: Vec::new(),
        singular_values: Vec::new(),
    }
}

/// Runs `config` and writes the report to `config.out` when set.
pub fn run(config: &RunConfig) -> Result<RunReport, Error> {
    config.validate()?;
    let started = Instant::now();
    let problem = config.load_problem()?;
    let grid = ParameterGrid::new(config.mu0, config.rho, config.p)?;
    // a separate stream from the one the generator used
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(1);
    let opts = PipelineOptions {
        n_phase_bits: config.n_phase_bits,
        max_phase_bits: config.n_phase_bits.max(12),
        ..Default::default()
    };
    let lcurve = Criterion::LCurveSum(Default::default());

    let (points, summary) = match config.method {
        Method::Lcurve => {
            let est = lcurve_pipeline(&problem, &grid, &opts, config.epsilon, &mut rng)?;
            let oracle = classical_select(&problem, &grid, lcurve)?;
            (
                selection_table(Some(&est), &oracle),
                selection_summary(config.method, Some(&est), &oracle),
            )
        }
        Method::Gcv => {
            let est = gcv_pipeline(
                &problem,
                &grid,
                config.rank,
                &opts,
                config.epsilon,
                &mut rng,
            )?;
            let oracle = classical_select(&problem, &grid, Criterion::GcvLowRank(config.rank))?;
            (
                selection_table(Some(&est), &oracle),
                selection_summary(config.method, Some(&est), &oracle),
            )
        }
        Method::ClassicalLcurve | Method::ClassicalGcv => {
            let criterion = if config.method == Method::ClassicalGcv {
                Criterion::Gcv
            } else {
                lcurve
            };
            let oracle = classical_select(&problem, &grid, criterion)?;
            (
                selection_table(None, &oracle),
                selection_summary(config.method, None, &oracle),
            )
        }
        Method::Tikhonov => {
            let svd = compute_svd(&problem.a)?;
            let mut points = Vec::with_capacity(grid.len());
            for (j, &mu) in grid.mus.iter().enumerate() {
                let sol = tikhonov_solve(&svd, &problem.b, mu)?;
                let mut pt = empty_point(j);
                pt.mu = Some(mu);
                pt.oracle_solution_norm = sol.solution_norm;
                pt.oracle_residual_norm = sol.residual_norm;
                points.push(pt);
            }
            let n = points.len();
            (points, table_summary(config.method, n))
        }
        Method::Tsvd => {
            let svd = compute_svd(&problem.a)?;
            let mut points = Vec::new();
            for k in 1..=svd.numerical_rank() {
                let sol = tsvd_solve(&svd, &problem.b, k)?;
                let mut pt = empty_point(k - 1);
                pt.truncation = Some(k);
                pt.oracle_solution_norm = sol.solution_norm;
                pt.oracle_residual_norm = sol.residual_norm;
                points.push(pt);
            }
            let n = points.len();
            (points, table_summary(config.method, n))
        }
    };

    let report = RunReport {
        config: config.clone(),
        points,
        summary,
        wall_time: started.elapsed(),
    };
    log::info!("{} finished in {:.3?}", config.method, report.wall_time);
    if let Some(path) = &config.out {
        fs::write(path, report.to_jsonl()).map_err(|source| IoError::Write {
            path: path.clone(),
            source,
        })?;
    }
    Ok(report)
}
