use num_complex::Complex64;

use super::AmplitudeError;
use crate::sim::{StateVector, UnitaryOp};

/// A prepared state `|φ> = U|0...0>` with a designated good subspace.
///
/// A basis state is good when every flag qubit is `|0>`. The good part has
/// norm `cos θ` and the rest `sin θ`. The unitary is optional: large
/// simulated circuits only keep the state they produce.
#[derive(Debug, Clone)]
pub struct StatePrep {
    state: StateVector,
    flag_qubits: Vec<usize>,
    unitary: Option<UnitaryOp>,
    flag_mask: usize,
}

impl StatePrep {
    /// Preparation from an explicit unitary with a single flag qubit.
    pub fn from_unitary(unitary: UnitaryOp, flag_qubit: usize) -> Result<Self, AmplitudeError> {
        let k = unitary.num_qubits();
        let mut first_column: Vec<Complex64> = unitary.matrix().column(0).iter().copied().collect();
        // the unitarity check already pins the norm; renormalize the rounding away
        let norm = first_column
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt();
        first_column.iter_mut().for_each(|a| *a /= norm);
        let state = StateVector::from_amplitudes(first_column)?;
        let mut prep = Self::from_state(state, vec![flag_qubit])?;
        debug_assert_eq!(prep.state.num_qubits(), k);
        prep.unitary = Some(unitary);
        Ok(prep)
    }

    /// Preparation known only through its output state.
    pub fn from_state(state: StateVector, flag_qubits: Vec<usize>) -> Result<Self, AmplitudeError> {
        let n = state.num_qubits();
        for &q in &flag_qubits {
            if q >= n {
                return Err(AmplitudeError::InvalidFlag {
                    qubit: q,
                    num_qubits: n,
                });
            }
        }
        state.check_qubits(&flag_qubits)?;
        let flag_mask = flag_qubits.iter().map(|&q| 1usize << (n - 1 - q)).sum();
        Ok(Self {
            state,
            flag_qubits,
            unitary: None,
            flag_mask,
        })
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn flag_qubits(&self) -> &[usize] {
        &self.flag_qubits
    }

    pub fn unitary(&self) -> Option<&UnitaryOp> {
        self.unitary.as_ref()
    }

    pub fn num_qubits(&self) -> usize {
        self.state.num_qubits()
    }

    pub fn is_good(&self, index: usize) -> bool {
        index & self.flag_mask == 0
    }

    /// Norm of the good part, `cos θ`.
    pub fn good_amplitude(&self) -> f64 {
        self.good_mass().sqrt()
    }

    pub fn good_mass(&self) -> f64 {
        self.state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(i, _)| self.is_good(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            .min(1.0)
    }

    /// Exact angle `θ` in `[0, π/2]`.
    pub fn theta(&self) -> f64 {
        self.good_amplitude().clamp(0.0, 1.0).acos()
    }

    /// The unnormalized good part of the state.
    pub fn good_component(&self) -> Vec<Complex64> {
        self.state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if self.is_good(i) {
                    *a
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect()
    }

    /// Applies the flag reflection `S` (negates bad components) in place.
    pub(crate) fn reflect_flags(&self, amps: &mut [Complex64]) {
        for (i, a) in amps.iter_mut().enumerate() {
            if !self.is_good(i) {
                *a = -*a;
            }
        }
    }
}
