//! Command-line driver: one run, one JSON-lines report.
//!
//! Log verbosity comes from `QTIK_LOG` (default `warn`).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use quantum_tikhonov::io::{run, Method, ProblemKind, ProblemSource, RunConfig};
use quantum_tikhonov::Error;

#[derive(Debug, Parser)]
#[command(
    name = "qtik",
    version,
    about = "Quantum-simulated Tikhonov parameter selection"
)]
struct Args {
    /// Generator: geometric-spectrum, low-rank or hilbert-like.
    #[arg(long, default_value = "geometric-spectrum")]
    problem: String,
    #[arg(long, default_value_t = 6)]
    m: usize,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 1e-2)]
    noise: f64,
    /// Matrix Market file with A; replaces the generator.
    #[arg(long, requires = "rhs_file")]
    matrix_file: Option<PathBuf>,
    /// Matrix Market file with b (an n x 1 matrix).
    #[arg(long, requires = "matrix_file")]
    rhs_file: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    mu0: f64,
    #[arg(long, default_value_t = 0.9)]
    rho: f64,
    #[arg(long, default_value_t = 16)]
    p: usize,
    /// lcurve, gcv, classical-lcurve, classical-gcv, tikhonov or tsvd.
    #[arg(long, default_value = "lcurve")]
    method: String,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 8)]
    phase_bits: usize,
    #[arg(long, default_value_t = 2)]
    rank: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Args {
    fn into_config(self) -> Result<RunConfig, Error> {
        let problem = match (self.matrix_file, self.rhs_file) {
            (Some(matrix), Some(rhs)) => ProblemSource::Files { matrix, rhs },
            _ => {
                let kind: ProblemKind = self
                    .problem
                    .parse()
                    .map_err(|e| Error::Usage(format!("--problem: {e}")))?;
                ProblemSource::Generated {
                    kind,
                    m: self.m,
                    n: self.n,
                    noise: self.noise,
                }
            }
        };
        Ok(RunConfig {
            problem,
            mu0: self.mu0,
            rho: self.rho,
            p: self.p,
            method: self.method.parse::<Method>()?,
            epsilon: self.epsilon,
            n_phase_bits: self.phase_bits,
            rank: self.rank,
            seed: self.seed,
            out: self.out,
        })
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("QTIK_LOG", "warn")).init();
    let args = Args::parse();
    let result = args.into_config().and_then(|cfg| {
        let report = run(&cfg)?;
        if cfg.out.is_none() {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not worth a failure status
            let _ = stdout.write_all(report.to_jsonl().as_bytes());
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qtik: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
