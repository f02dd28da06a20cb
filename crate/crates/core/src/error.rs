use thiserror::Error;

/// Errors raised by the library. Divergent integrals are *not* errors: they
/// come back as a [`crate::quadrature::FunctionalValue`] with a divergent status.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no analytic derivative rule of order {order} for {family}")]
    UnsupportedOrder { family: String, order: usize },

    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("Hermite degree {0} exceeds the supported maximum 30")]
    DegreeTooLarge(usize),

    #[error("polynomial is not monic: leading coefficient {0}")]
    NotMonic(f64),

    #[error("moment of order {order} diverges, required by {context}")]
    MomentRequired { order: f64, context: String },

    #[error("root finding did not converge after {iterations} iterations (target {target})")]
    NonConvergence { iterations: usize, target: f64 },

    #[error("unsupported density: {0}")]
    UnsupportedDensity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("descriptor error at `{field}`: {message}")]
    Descriptor { field: String, message: String },

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn descriptor(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Descriptor {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
