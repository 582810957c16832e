use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("number to factor must be at least 2, got {0}")]
    TargetTooSmall(u64),

    #[error("exponent must be at least 1")]
    ZeroExponent,

    #[error("trial factor must be at least 1")]
    ZeroTrialFactor,

    #[error("sequence of {terms} pulses exceeds the cap of {cap} terms; lower M or raise the cap")]
    SequenceTooLong { terms: u64, cap: u64 },

    #[error("flip angle must be finite and positive, got {0} rad")]
    InvalidFlipAngle(f64),

    #[error("reference signal vanishes for M = {m}, theta = {theta} rad: (M+1)*theta is a multiple of pi")]
    ZeroReference { m: u64, theta: f64 },

    #[error("spatial averaging needs at least 2 slices, got {0}")]
    TooFewSlices(usize),

    #[error("windings must be at least 1")]
    ZeroWindings,

    #[error("{windings} windings over {n_slices} slices leaves every slice in phase; pick windings not divisible by the slice count")]
    NoDephasing { n_slices: usize, windings: u32 },

    #[error("invalid trial factor range [{min}, {max}]: need 2 <= j_min <= j_max")]
    InvalidRange { min: u64, max: u64 },

    #[error("threshold must lie strictly between 0 and 1, got {0}")]
    InvalidThreshold(f64),

    #[error("cannot compose an empty pulse sequence")]
    EmptySequence,

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }

    /// True for errors caused by bad input rather than by the environment.
    pub fn is_config_error(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}
