//! Per-parameter HHL setup shared by both pipelines.

use rand::Rng;

use super::{durr_hoyer_min, MinimumSearch, ParameterGrid, PipelineOptions, SearchError};
use crate::amplitude::{bits_for_accuracy, function_readout, FunctionReadout, StatePrep};
use crate::hhl::{HhlConfig, HhlError};
use crate::linalg::{build_extended, ExtendedMatrix, RegularizedProblem};

pub(crate) struct Branch {
    pub mu: f64,
    pub ext: ExtendedMatrix,
    pub cfg: HhlConfig,
}

fn at(mu: f64) -> impl Fn(HhlError) -> SearchError {
    move |source| SearchError::Branch { mu, source }
}

/// Smallest phase width in `opts`' range that resolves the spectrum.
fn phase_bits_for(ext: &ExtendedMatrix, opts: &PipelineOptions) -> Result<usize, HhlError> {
    let mut bits = opts.n_phase_bits;
    loop {
        match HhlConfig::from_extended(ext, bits)?.validate(ext) {
            Ok(()) => return Ok(bits),
            Err(HhlError::PhaseResolution { .. }) if bits < opts.max_phase_bits => bits += 1,
            Err(e) => return Err(e),
        }
    }
}

/// One validated configuration per grid point. Every branch shares the
/// widest phase register any of them needs, so that all index branches
/// act on the same qubits.
pub(crate) fn prepare_branches(
    problem: &RegularizedProblem,
    grid: &ParameterGrid,
    opts: &PipelineOptions,
) -> Result<Vec<Branch>, SearchError> {
    opts.check()?;
    if grid.is_empty() {
        return Err(SearchError::InvalidGrid("grid is empty".into()));
    }
    let mut exts = Vec::with_capacity(grid.len());
    let mut bits = opts.n_phase_bits;
    for &mu in &grid.mus {
        let ext = build_extended(&problem.a, mu).map_err(|e| at(mu)(e.into()))?;
        bits = bits.max(phase_bits_for(&ext, opts).map_err(at(mu))?);
        exts.push(ext);
    }
    log::debug!("pipeline branches use {bits} phase bits");
    exts.into_iter()
        .map(|ext| {
            let mu = ext.mu;
            let cfg = HhlConfig::from_extended(&ext, bits).map_err(at(mu))?;
            cfg.validate(&ext).map_err(at(mu))?;
            Ok(Branch { mu, ext, cfg })
        })
        .collect()
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<(), SearchError> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(SearchError::InvalidOption(format!(
            "epsilon must be positive, got {epsilon}"
        )))
    }
}

/// Smallest power of two at or above `x`, so dividing by it is a shift on
/// the fixed-point register.
pub(crate) fn register_scale(x: f64) -> f64 {
    2f64.powi(x.log2().ceil().max(0.0) as i32)
}

/// Estimation width meeting the largest per-branch accuracy demand.
pub(crate) fn shared_bits(accuracies: impl Iterator<Item = f64>) -> Result<usize, SearchError> {
    let mut bits = 1;
    for acc in accuracies {
        bits = bits.max(bits_for_accuracy(acc.min(1.0))?);
    }
    Ok(bits)
}

/// Reads every branch's function register: one readout per branch, measured
/// `repetitions` times, median kept.
pub(crate) fn realized_medians<R: Rng + ?Sized>(
    preps: &[StatePrep],
    fs: &[Box<dyn Fn(f64) -> f64 + '_>],
    n_bits: usize,
    repetitions: usize,
    rng: &mut R,
) -> Result<Vec<f64>, SearchError> {
    let readouts: Vec<FunctionReadout> = preps
        .iter()
        .zip(fs)
        .map(|(p, f)| function_readout(p, f.as_ref(), n_bits))
        .collect::<Result<_, _>>()?;
    Ok(readouts
        .iter()
        .map(|r| {
            let mut v: Vec<f64> = (0..repetitions).map(|_| r.sample_value(rng)).collect();
            v.sort_by(f64::total_cmp);
            v[repetitions / 2]
        })
        .collect())
}

/// Independent minimum searches; the lowest `(value, index)` found wins and
/// the query counts add up.
pub(crate) fn restarted_search<R: Rng + ?Sized>(
    values: &[f64],
    restarts: usize,
    rng: &mut R,
) -> MinimumSearch {
    let mut best: Option<MinimumSearch> = None;
    let mut total = 0;
    for _ in 0..restarts {
        let run = durr_hoyer_min(values, rng);
        total += run.queries_used;
        let better = match &best {
            None => true,
            Some(b) => values[run.index]
                .total_cmp(&values[b.index])
                .then(run.index.cmp(&b.index))
                .is_lt(),
        };
        if better {
            best = Some(run);
        }
    }
    let mut best = best.expect("at least one restart");
    best.queries_used = total;
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scales_are_powers_of_two() {
        assert_eq!(register_scale(0.3), 1.0);
        assert_eq!(register_scale(1.0), 1.0);
        assert_eq!(register_scale(1.01), 2.0);
        assert_eq!(register_scale(17.0), 32.0);
    }

    #[test]
    fn branches_share_phase_width() {
        let problem = RegularizedProblem::new(
            crate::linalg::real_diagonal(&[1.0, 0.97]),
            crate::linalg::real_vector(&[1.0, 1.0]),
        )
        .unwrap();
        let grid = ParameterGrid::new(1.0, 0.5, 3).unwrap();
        let opts = PipelineOptions {
            n_phase_bits: 3,
            max_phase_bits: 10,
            ..Default::default()
        };
        let branches = prepare_branches(&problem, &grid, &opts).unwrap();
        let bits = branches[0].cfg.n_phase_bits;
        assert!(bits > 3);
        assert!(branches.iter().all(|b| b.cfg.n_phase_bits == bits));
    }
}
