use thiserror::Error;

/// Errors raised by simulation operations.
///
/// Scenario consistency problems are not errors; see [`crate::scenario::validate_scenario`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sample rate {fs} Hz too low: need more than {required} Hz")]
    SampleRate { fs: f64, required: f64 },

    #[error("sample rate mismatch: {a} Hz vs {b} Hz")]
    RateMismatch { a: f64, b: f64 },

    #[error("no carrier detectable at {f_c} Hz")]
    NoCarrier { f_c: f64 },

    #[error("field undefined at distance {r} m from a source")]
    CoincidentPoint { r: f64 },

    #[error("time {t} s outside trajectory span [0, {duration}] s")]
    TimeOutOfRange { t: f64, duration: f64 },

    #[error("unknown {what} `{name}`")]
    Unknown { what: &'static str, name: String },

    #[error("target WER {target} unattainable; best achievable {achievable}")]
    Unattainable { target: f64, achievable: f64 },

    #[error("missing {0}")]
    Missing(&'static str),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
