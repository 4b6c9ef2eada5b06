//! Problem generation, Matrix Market files, and the run driver behind the
//! `qtik` binary.

mod generate;
mod matrix_market;
mod run;

pub use generate::{generate_problem, generate_problem_with, GeneratorParams, ProblemKind};
pub use matrix_market::{
    format_matrix, load_matrix, load_vector, parse_matrix, save_matrix, save_vector,
};
pub use run::{run, Method, PointRecord, ProblemSource, RunConfig, RunReport, Summary};

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}, line {line}: {message}")]
    ParseFile {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Shape(String),
    #[error("{0}")]
    Generator(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl IoError {
    fn in_file(self, path: &Path) -> Self {
        match self {
            Self::Parse { line, message } => Self::ParseFile {
                path: path.to_path_buf(),
                line,
                message,
            },
            other => other,
        }
    }

    /// Line number of a parse failure.
    pub fn line(&self) -> Option<usize> {
        match self {
            Self::Parse { line, .. } | Self::ParseFile { line, .. } => Some(*line),
            _ => None,
        }
    }
}
