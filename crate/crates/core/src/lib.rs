//! Simulated quantum selection of Tikhonov regularization parameters.
//!
//! [`linalg`] holds the exact SVD machinery and acts as the oracle,
//! [`sim`] is a dense statevector simulator, [`amplitude`] and [`hhl`] build
//! the norm estimators, [`search`] runs the L-curve and GCV selections, and
//! [`io`] drives whole runs from a [`io::RunConfig`].

pub mod amplitude;
mod error;
pub mod hhl;
pub mod io;
pub mod linalg;
pub mod search;
pub mod sim;

pub use error::Error;
