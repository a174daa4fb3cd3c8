use std::io;

use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants fall into two classes: configuration mistakes (bad parameters,
/// unknown presets, malformed format descriptors) and data problems
/// (unreadable or empty inputs). [`Error::is_config`] distinguishes them so a
/// front end can map the classes to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("input contained no usable interaction records")]
    EmptyInput,

    #[error("invalid format descriptor: {0}")]
    InvalidFormat(String),

    #[error("unknown measure preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid measure spec: {0}")]
    InvalidSpec(String),

    #[error("lambda must lie in (0, 1], got {0}")]
    InvalidLambda(f64),

    #[error("test fraction must lie strictly between 0 and 1, got {0}")]
    InvalidFraction(f64),

    #[error("clamp floor must be positive, got {0}")]
    InvalidClampFloor(f64),

    #[error("{axis} index {index} out of range for {len} {axis}s")]
    IndexOutOfRange {
        axis: &'static str,
        index: usize,
        len: usize,
    },

    #[error("need at least two paired observations for a significance test, got {0}")]
    InsufficientData(usize),
}

impl Error {
    /// True when the error stems from configuration rather than input data.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidFormat(_)
                | Error::UnknownPreset(_)
                | Error::InvalidSpec(_)
                | Error::InvalidLambda(_)
                | Error::InvalidFraction(_)
                | Error::InvalidClampFloor(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
