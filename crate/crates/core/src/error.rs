use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GalError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("zero polynomial not allowed: {0}")]
    ZeroPolynomial(&'static str),

    #[error("ring mismatch: expected {expected} variables, found {found}")]
    RingMismatch { expected: usize, found: usize },

    #[error("radical refused: characteristic {p} does not exceed the degree bound {bound}")]
    CharacteristicTooSmall { p: u64, bound: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("iteration cap of {cap} rounds exceeded in {what}")]
    IterationCap { what: &'static str, cap: usize },

    #[error("not flat over R: {0}")]
    NotFlat(String),

    #[error("precision exhausted: {0}")]
    Precision(String),

    #[error("{context}: {source}")]
    Chart {
        context: String,
        #[source]
        source: Box<GalError>,
    },
}

impl GalError {
    pub fn in_chart(self, context: impl Into<String>) -> GalError {
        GalError::Chart { context: context.into(), source: Box::new(self) }
    }

    /// True for errors that stem from a rejected model or chart rather than a bug or bad syntax.
    pub fn is_precondition(&self) -> bool {
        match self {
            GalError::Precondition(_)
            | GalError::NotFlat(_)
            | GalError::CharacteristicTooSmall { .. }
            | GalError::Unsupported(_) => true,
            GalError::Chart { source, .. } => source.is_precondition(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, GalError>;
