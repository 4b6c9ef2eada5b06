//! Amplitude estimation through phase estimation of a Grover operator.
//!
//! A [`StatePrep`] splits its prepared state into a good part (every flag
//! qubit reads `|0>`, amplitude `cos θ`) and a bad part (amplitude `sin θ`).
//! The Grover operator rotates the plane spanned by those two parts by `2θ`,
//! so reading its eigenphase recovers `θ`.

mod coherent;
mod estimate;
mod fixed_point;
mod grover;
mod prep;

pub use coherent::{
    coherent_estimate, function_readout, parallel_estimate, CoherentEstimate, FunctionReadout,
    ParallelEstimate,
};
pub use estimate::{
    bits_for_accuracy, estimate_theta, estimate_theta_median, fold_register, folded_distribution,
    theta_distribution, AmplitudeEstimate,
};
pub use fixed_point::{FixedPoint, FRACTIONAL_BITS, REGISTER_BITS};
pub use grover::{grover_operator, grover_plane, GroverOperator, GroverPlane};
pub use prep::StatePrep;

use thiserror::Error;

use crate::sim::SimError;

#[derive(Debug, Error)]
pub enum AmplitudeError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("phase register needs between 1 and {max} bits, got {bits}")]
    InvalidBits { bits: usize, max: usize },
    #[error("target accuracy must be in (0, 1], got {0}")]
    InvalidAccuracy(f64),
    #[error("median mode needs an odd, positive repetition count, got {0}")]
    EvenRepetitions(usize),
    #[error("flag qubit {qubit} out of range for a {num_qubits}-qubit preparation")]
    InvalidFlag { qubit: usize, num_qubits: usize },
    #[error("parallel estimate needs at least one branch")]
    NoBranches,
    #[error("branch {index} has {found} qubits, branch 0 has {expected}")]
    WidthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("got {preps} preparations, {functions} functions and {weights} weights")]
    LengthMismatch {
        preps: usize,
        functions: usize,
        weights: usize,
    },
    #[error("branch weights have norm {0}, expected 1")]
    WeightsNotNormalized(f64),
}
