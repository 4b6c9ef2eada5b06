use num_complex::Complex64;
use rand::Rng;

use super::{check_capacity, qubits_for_dim, SimError};

const NORM_TOLERANCE: f64 = 1e-10;

/// Amplitudes of a `num_qubits`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(num_qubits: usize) -> Result<Self, SimError> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self, SimError> {
        check_capacity(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(SimError::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Wraps amplitudes that must already be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        let num_qubits = qubits_for_dim(amplitudes.len())?;
        check_capacity(num_qubits)?;
        let norm = l2(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(SimError::NotNormalized { norm });
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Normalizes the given amplitudes, padding with zeros to a power of two.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        let dim = amplitudes.len().max(1).next_power_of_two();
        amplitudes.resize(dim, Complex64::new(0.0, 0.0));
        let norm = l2(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(SimError::NotNormalized { norm });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        let num_qubits = qubits_for_dim(dim)?;
        check_capacity(num_qubits)?;
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub(crate) fn from_raw(num_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        Self {
            num_qubits,
            amplitudes,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2(&self.amplitudes)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, SimError> {
        if self.dim() != other.dim() {
            return Err(SimError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `self ⊗ other`, with `self` in the high bits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector, SimError> {
        let qubits = self.num_qubits + other.num_qubits;
        check_capacity(qubits)?;
        let mut out = Vec::with_capacity(1 << qubits);
        for a in &self.amplitudes {
            out.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Ok(Self {
            num_qubits: qubits,
            amplitudes: out,
        })
    }

    /// Marginal distribution over `qubits`, with `qubits[0]` the most
    /// significant bit of the outcome.
    pub fn marginal(&self, qubits: &[usize]) -> Result<Vec<f64>, SimError> {
        self.check_qubits(qubits)?;
        let positions: Vec<usize> = qubits.iter().map(|&q| self.num_qubits - 1 - q).collect();
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (idx, a) in self.amplitudes.iter().enumerate() {
            probs[outcome_of(idx, &positions)] += a.norm_sqr();
        }
        Ok(probs)
    }

    pub(crate) fn check_qubits(&self, qubits: &[usize]) -> Result<(), SimError> {
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(SimError::QubitOutOfRange {
                    qubit: q,
                    num_qubits: self.num_qubits,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(SimError::DuplicateTarget(q));
            }
        }
        Ok(())
    }
}

fn outcome_of(idx: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .fold(0, |acc, &p| (acc << 1) | ((idx >> p) & 1))
}

pub(crate) fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Samples `qubits` from the Born distribution and collapses the state.
///
/// The outcome packs `qubits[0]` into the most significant bit.
pub fn measure<R: Rng + ?Sized>(
    state: &StateVector,
    qubits: &[usize],
    rng: &mut R,
) -> Result<(usize, StateVector), SimError> {
    let probs = state.marginal(qubits)?;
    let outcome = sample_index(&probs, rng);
    let positions: Vec<usize> = qubits.iter().map(|&q| state.num_qubits - 1 - q).collect();
    let mut amplitudes = state.amplitudes.clone();
    for (idx, a) in amplitudes.iter_mut().enumerate() {
        if outcome_of(idx, &positions) != outcome {
            *a = Complex64::new(0.0, 0.0);
        }
    }
    let norm = l2(&amplitudes);
    for a in &mut amplitudes {
        *a /= norm;
    }
    Ok((
        outcome,
        StateVector {
            num_qubits: state.num_qubits,
            amplitudes,
        },
    ))
}

/// Inverse-CDF sampling; the distribution need not be exactly normalized.
pub(crate) fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last_nonzero = i;
        }
        acc += p;
        if target < acc {
            return i;
        }
    }
    last_nonzero
}
