use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::SearchError;
use crate::linalg::ExtendedMatrix;
use crate::sim::{
    pad_to_power_of_two, phase_estimation, register_marginal, sample_index, signed_register,
    Evolution, KronIdentity, StateVector,
};

/// Singular values recovered by sampling phase estimation on `|Ã_mu>`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrincipalSpectrum {
    /// Estimates of `σ_i` (regularization removed), descending.
    pub sigma: Vec<f64>,
    /// Cluster centers `σ̃_i`, descending.
    pub sigma_tilde: Vec<f64>,
    /// Width of one phase cell in units of `σ̃`.
    pub resolution: f64,
    /// Shots that landed in each kept cluster.
    pub counts: Vec<usize>,
    pub shots: usize,
}

/// Share of `Σ σ̃²` the premise requires from the top `r` modes.
const LOW_RANK_MASS: f64 = 0.99;

/// The `r` principal singular values of `A`, read from `ext`.
///
/// The evolution time `π / (2 ‖A_mu‖_F)` keeps every eigenvalue within a
/// quarter turn.
pub fn principal_singular_values<R: Rng + ?Sized>(
    ext: &ExtendedMatrix,
    r: usize,
    n_bits: usize,
    shots: usize,
    rng: &mut R,
) -> Result<PrincipalSpectrum, SearchError> {
    let frob = ext
        .extended_singular_values()
        .iter()
        .map(|s| s * s)
        .sum::<f64>()
        .sqrt();
    principal_singular_values_at(ext, r, n_bits, shots, PI / (2.0 * frob), rng)
}

/// [`principal_singular_values`] with an explicit evolution time `t`.
pub fn principal_singular_values_at<R: Rng + ?Sized>(
    ext: &ExtendedMatrix,
    r: usize,
    n_bits: usize,
    shots: usize,
    t: f64,
    rng: &mut R,
) -> Result<PrincipalSpectrum, SearchError> {
    let n = ext.cols();
    if r == 0 || r > n {
        return Err(SearchError::InvalidRank { r, max: n });
    }
    if shots == 0 {
        return Err(SearchError::InvalidOption(
            "singular-value sampling needs at least one shot".into(),
        ));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(SearchError::InvalidOption(format!(
            "evolution time must be positive, got {t}"
        )));
    }
    let st = ext.extended_singular_values();
    let total: f64 = st.iter().map(|s| s * s).sum();
    let mass = st[..r].iter().map(|s| s * s).sum::<f64>() / total;
    if mass < LOW_RANK_MASS {
        return Err(SearchError::LowRankPremise { r, mass });
    }

    // |D> = Σ d_ij |i>|j> / ‖D‖_F, i.e. Σ_k λ_k |v_k>|v̄_k> up to normalization
    let d = pad_to_power_of_two(&ext.dilation);
    let dim = d.nrows();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            amps[i * dim + j] = d[(i, j)];
        }
    }
    let input = StateVector::normalized(amps)?;
    let evo = Evolution::new(&d, t)?;
    let op = KronIdentity {
        op: &evo,
        low_dim: dim,
    };
    let out = phase_estimation(&op, &input, n_bits)?;
    let probs = register_marginal(out.amplitudes(), n_bits);

    let mut hist: BTreeMap<u64, usize> = BTreeMap::new();
    for _ in 0..shots {
        let k = signed_register(sample_index(&probs, rng), n_bits).unsigned_abs();
        // zero eigenvalues carry no weight; a zero cell is leakage
        if k > 0 {
            *hist.entry(k).or_insert(0) += 1;
        }
    }
    let clusters = cluster(&hist);
    if clusters.len() < r {
        return Err(SearchError::TooFewClusters {
            found: clusters.len(),
            needed: r,
            shots,
        });
    }
    let resolution = 2.0 * PI / ((1u64 << n_bits) as f64 * t);
    let mut kept: Vec<(u64, usize)> = clusters;
    kept.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
    kept.truncate(r);
    kept.sort_by_key(|k| std::cmp::Reverse(k.0));
    let sigma_tilde: Vec<f64> = kept.iter().map(|&(k, _)| k as f64 * resolution).collect();
    let mu2 = ext.mu * ext.mu;
    Ok(PrincipalSpectrum {
        sigma: sigma_tilde
            .iter()
            .map(|s| (s * s - mu2).max(0.0).sqrt())
            .collect(),
        sigma_tilde,
        resolution,
        counts: kept.iter().map(|&(_, c)| c).collect(),
        shots,
    })
}

/// Runs of adjacent cells become one cluster centered on its modal cell
/// (lowest cell on ties). Returns `(center, count)`.
fn cluster(hist: &BTreeMap<u64, usize>) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    let mut current: Option<(u64, u64, usize, usize)> = None; // (last, mode, mode count, total)
    for (&k, &c) in hist {
        current = match current {
            Some((last, mode, mc, total)) if k == last + 1 => {
                if c > mc {
                    Some((k, k, c, total + c))
                } else {
                    Some((k, mode, mc, total + c))
                }
            }
            Some((_, mode, _, total)) => {
                out.push((mode, total));
                Some((k, k, c, c))
            }
            None => Some((k, k, c, c)),
        };
    }
    if let Some((_, mode, _, total)) = current {
        out.push((mode, total));
    }
    out
}
