use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use super::estimate::plane_qpe;
use super::{fold_register, AmplitudeError, FixedPoint, GroverPlane, StatePrep, REGISTER_BITS};
use crate::sim::{check_capacity, qpe_inverse_in_place, sample_index, StateVector};

const NOISE_MASS: f64 = 1e-28;

/// `|φ>|0>|0> ↦ Σ_c |ψ_c>|c>` after phase estimation, evaluation of
/// `f(cos θ̃)` into a fixed-point register, and uncomputation of the phase
/// estimation.
///
/// The function register is kept sparse: one `[phase][plane]` block per code
/// that actually occurs. For a dyadic angle there is a single block and it
/// equals `|φ>|0>` exactly.
#[derive(Debug, Clone)]
pub struct CoherentEstimate {
    n_bits: usize,
    plane: GroverPlane,
    blocks: BTreeMap<u32, Vec<Complex64>>,
    saturated: bool,
}

impl CoherentEstimate {
    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    /// True when some outcome of `f` fell outside the register range.
    pub fn saturated(&self) -> bool {
        self.saturated
    }

    pub fn codes(&self) -> impl Iterator<Item = u32> + '_ {
        self.blocks.keys().copied()
    }

    /// Probability of each function-register code.
    pub fn code_distribution(&self) -> BTreeMap<u32, f64> {
        self.blocks
            .iter()
            .map(|(&c, b)| (c, b.iter().map(|a| a.norm_sqr()).sum()))
            .collect()
    }

    /// `(value, probability)` pairs in code order.
    pub fn value_distribution(&self) -> Vec<(f64, f64)> {
        self.code_distribution()
            .into_iter()
            .map(|(c, p)| (FixedPoint::decode_code(c), p))
            .collect()
    }

    /// Most likely register value; ties go to the lowest code.
    pub fn dominant_value(&self) -> f64 {
        let mut best = (0u32, -1.0);
        for (c, p) in self.code_distribution() {
            if p > best.1 {
                best = (c, p);
            }
        }
        FixedPoint::decode_code(best.0)
    }

    /// Measures the function register.
    pub fn sample_value<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let dist: Vec<(u32, f64)> = self.code_distribution().into_iter().collect();
        let probs: Vec<f64> = dist.iter().map(|(_, p)| *p).collect();
        FixedPoint::decode_code(dist[sample_index(&probs, rng)].0)
    }

    /// The `[phase][plane]` amplitudes attached to `code`.
    pub fn block(&self, code: u32) -> Option<&[Complex64]> {
        self.blocks.get(&code).map(|b| b.as_slice())
    }

    /// System vector paired with phase register `|0>` and `code`.
    pub fn system_component(&self, code: u32) -> Vec<Complex64> {
        match self.blocks.get(&code) {
            Some(b) => self.plane.embed(b[0], b[1]),
            None => vec![Complex64::new(0.0, 0.0); self.plane.e1.len()],
        }
    }

    /// `<φ, 0, code | state>`.
    pub fn overlap_with_input(&self, code: u32) -> Complex64 {
        self.blocks
            .get(&code)
            .map_or(Complex64::new(0.0, 0.0), |b| b[0])
    }

    pub fn norm(&self) -> f64 {
        self.code_distribution().values().sum::<f64>().sqrt()
    }

    /// Dense state over `[system][phase][function]`, when it fits.
    pub fn to_state_vector(&self) -> Result<StateVector, AmplitudeError> {
        let sys = self.plane.e1.len();
        let sys_qubits = sys.trailing_zeros() as usize;
        let total = sys_qubits + self.n_bits + REGISTER_BITS as usize;
        check_capacity(total)?;
        let f_dim = 1usize << REGISTER_BITS;
        let reg = 1usize << self.n_bits;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << total];
        for (&code, block) in &self.blocks {
            for y in 0..reg {
                let v = self.plane.embed(block[2 * y], block[2 * y + 1]);
                for (s, a) in v.into_iter().enumerate() {
                    amps[(s * reg + y) * f_dim + code as usize] += a;
                }
            }
        }
        Ok(StateVector::from_amplitudes(amps)?)
    }
}

/// Coherent amplitude estimation of `f(cos θ)` into a function register.
pub fn coherent_estimate(
    prep: &StatePrep,
    f: &dyn Fn(f64) -> f64,
    n_bits: usize,
) -> Result<CoherentEstimate, AmplitudeError> {
    let (plane, amps) = plane_qpe(prep, n_bits)?;
    let mut grouped: BTreeMap<u32, Vec<Complex64>> = BTreeMap::new();
    let mut saturated = false;
    let zero = Complex64::new(0.0, 0.0);
    for (y, pair) in amps.chunks(2).enumerate() {
        // rows carrying only floating-point noise would spawn spurious codes
        if pair.iter().map(|a| a.norm_sqr()).sum::<f64>() < NOISE_MASS {
            continue;
        }
        let value = FixedPoint::encode(f(fold_register(y, n_bits).cos()));
        saturated |= value.saturated;
        let block = grouped
            .entry(value.code)
            .or_insert_with(|| vec![zero; amps.len()]);
        block[2 * y..2 * y + 2].copy_from_slice(pair);
    }
    for block in grouped.values_mut() {
        qpe_inverse_in_place(block, n_bits, &plane.op)?;
    }
    Ok(CoherentEstimate {
        n_bits,
        plane,
        blocks: grouped,
        saturated,
    })
}

/// Measurement statistics of the function register alone.
///
/// Uncomputing the phase estimation acts within each code's block, so the
/// code probabilities are fixed before that step. This skips the per-code
/// blocks of [`CoherentEstimate`], which grow as `codes · 2^(n+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionReadout {
    pub n_bits: usize,
    /// `(code, probability)` in code order.
    pub distribution: Vec<(u32, f64)>,
    pub saturated: bool,
}

impl FunctionReadout {
    pub fn sample_value<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let probs: Vec<f64> = self.distribution.iter().map(|(_, p)| *p).collect();
        FixedPoint::decode_code(self.distribution[sample_index(&probs, rng)].0)
    }

    /// Most likely value; ties go to the lowest code.
    pub fn dominant_value(&self) -> f64 {
        let mut best = (0u32, -1.0);
        for &(c, p) in &self.distribution {
            if p > best.1 {
                best = (c, p);
            }
        }
        FixedPoint::decode_code(best.0)
    }
}

pub fn function_readout(
    prep: &StatePrep,
    f: &dyn Fn(f64) -> f64,
    n_bits: usize,
) -> Result<FunctionReadout, AmplitudeError> {
    let (_, amps) = plane_qpe(prep, n_bits)?;
    let mut grouped: BTreeMap<u32, f64> = BTreeMap::new();
    let mut saturated = false;
    for (y, pair) in amps.chunks(2).enumerate() {
        let mass: f64 = pair.iter().map(|a| a.norm_sqr()).sum();
        if mass < NOISE_MASS {
            continue;
        }
        let value = FixedPoint::encode(f(fold_register(y, n_bits).cos()));
        saturated |= value.saturated;
        *grouped.entry(value.code).or_insert(0.0) += mass;
    }
    Ok(FunctionReadout {
        n_bits,
        distribution: grouped.into_iter().collect(),
        saturated,
    })
}

/// `Σ_j w_j |j>|φ_j>|f_j(cos θ̃_j)>`: one coherent estimate per index branch.
#[derive(Debug, Clone)]
pub struct ParallelEstimate {
    weights: Vec<Complex64>,
    branches: Vec<CoherentEstimate>,
}

impl ParallelEstimate {
    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn branch(&self, j: usize) -> &CoherentEstimate {
        &self.branches[j]
    }

    pub fn n_bits(&self) -> usize {
        self.branches[0].n_bits
    }

    pub fn saturated(&self) -> bool {
        self.branches.iter().any(|b| b.saturated)
    }

    /// `<j, φ_j, 0, code | state>`.
    pub fn branch_amplitude(&self, j: usize, code: u32) -> Complex64 {
        self.weights[j] * self.branches[j].overlap_with_input(code)
    }

    /// Marginal of the index register.
    pub fn index_distribution(&self) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.branches)
            .map(|(w, b)| w.norm_sqr() * b.norm().powi(2))
            .collect()
    }

    /// Measures every branch's function register once.
    pub fn realize_values<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.branches.iter().map(|b| b.sample_value(rng)).collect()
    }

    pub fn dominant_values(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.dominant_value()).collect()
    }
}

/// Index-controlled [`coherent_estimate`] over `p` branches sharing one
/// phase-register width.
pub fn parallel_estimate(
    preps: &[StatePrep],
    fs: &[&dyn Fn(f64) -> f64],
    weights: &[Complex64],
    n_bits: usize,
) -> Result<ParallelEstimate, AmplitudeError> {
    if preps.is_empty() {
        return Err(AmplitudeError::NoBranches);
    }
    if fs.len() != preps.len() || weights.len() != preps.len() {
        return Err(AmplitudeError::LengthMismatch {
            preps: preps.len(),
            functions: fs.len(),
            weights: weights.len(),
        });
    }
    let width = preps[0].num_qubits();
    if let Some((index, p)) = preps
        .iter()
        .enumerate()
        .find(|(_, p)| p.num_qubits() != width)
    {
        return Err(AmplitudeError::WidthMismatch {
            index,
            expected: width,
            found: p.num_qubits(),
        });
    }
    let norm = weights.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(AmplitudeError::WeightsNotNormalized(norm));
    }
    let branches = preps
        .iter()
        .zip(fs)
        .map(|(p, f)| coherent_estimate(p, *f, n_bits))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ParallelEstimate {
        weights: weights.to_vec(),
        branches,
    })
}
