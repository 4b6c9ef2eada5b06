use thiserror::Error;

use crate::amplitude::AmplitudeError;
use crate::hhl::HhlError;
use crate::io::IoError;
use crate::linalg::LinalgError;
use crate::search::SearchError;
use crate::sim::SimError;

/// Any failure of a run, tagged with the module it came from.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] IoError),
    #[error("linalg: {0}")]
    Linalg(#[from] LinalgError),
    #[error("sim: {0}")]
    Sim(#[from] SimError),
    #[error("amplitude: {0}")]
    Amplitude(#[from] AmplitudeError),
    #[error("hhl: {0}")]
    Hhl(#[from] HhlError),
    #[error("search: {0}")]
    Search(#[from] SearchError),
}

impl Error {
    /// Process exit status; 2 is reserved for usage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Io(_) => 3,
            Self::Linalg(_) => 4,
            Self::Sim(_) => 5,
            Self::Amplitude(_) => 6,
            Self::Hhl(_) => 7,
            Self::Search(_) => 8,
        }
    }
}
