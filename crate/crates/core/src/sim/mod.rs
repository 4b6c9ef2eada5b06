//! Dense statevector simulation.
//!
//! Qubit ordering: qubit 0 is the most significant bit of a basis-state
//! index, so in a state with `q` qubits, qubit `i` is bit `q - 1 - i`. A
//! register listed first in a layout therefore occupies the high bits, and a
//! tensor product `a ⊗ b` puts `a` in front.

mod evolution;
mod op;
mod qft;
mod qpe;
mod state;

pub use evolution::{hamiltonian_evolution, pad_to_power_of_two, Evolution};
pub use op::{apply, apply_in_place, controlled, gates, KronIdentity, Operator, UnitaryOp};
pub use qft::{apply_register_qft, qft};
pub use qpe::{
    phase_estimation, qpe_forward_in_place, qpe_inverse_in_place, register_marginal,
    signed_register,
};
pub(crate) use state::sample_index;
pub use state::{measure, StateVector};

use thiserror::Error;

/// Widest dense register the simulator allocates.
pub const MAX_QUBITS: usize = 24;

pub(crate) const UNITARY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("simulation needs {requested} qubits, capacity is {max}")]
    Capacity { requested: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("target qubit {0} listed more than once")]
    DuplicateTarget(usize),
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("state norm is {norm}, expected 1")]
    NotNormalized { norm: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub(crate) fn check_capacity(qubits: usize) -> Result<(), SimError> {
    if qubits > MAX_QUBITS {
        Err(SimError::Capacity {
            requested: qubits,
            max: MAX_QUBITS,
        })
    } else {
        Ok(())
    }
}

/// `log2(dim)` for powers of two.
pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize, SimError> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(SimError::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Smallest qubit count whose dimension holds `dim` entries (at least one).
pub fn qubits_to_hold(dim: usize) -> usize {
    dim.max(2).next_power_of_two().trailing_zeros() as usize
}
