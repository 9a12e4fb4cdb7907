use thiserror::Error;

/// Which side of the passband a band-edge problem was found on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Lower => f.write_str("lower"),
            Side::Upper => f.write_str("upper"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("infeasible coupling: k2 = {k2} must lie in (0, pi^2/8)")]
    InfeasibleCoupling { k2: f64 },

    #[error("search error: {0}")]
    Search(String),

    #[error("grid alignment error: {0}")]
    Alignment(String),

    #[error("singular ABCD to S conversion at {frequency} Hz")]
    SingularConversion { frequency: f64 },

    #[error("{side} {level_db} dB band edge is not bracketed by the grid")]
    BandEdge { side: Side, level_db: f64 },

    #[error("degenerate passband: {0}")]
    DegeneratePassband(String),

    #[error("stopband is empty for guard {guard}")]
    EmptyStopband { guard: f64 },

    #[error("structure error: {0}")]
    Structure(String),

    #[error("infeasible specification: {0}")]
    Infeasible(String),

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn format_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format {
        line,
        message: msg.into(),
    }
}
