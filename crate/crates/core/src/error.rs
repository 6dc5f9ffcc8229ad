use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("symbol {symbol:?} is not part of the alphabet")]
    SymbolOutsideAlphabet { symbol: char },

    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(char),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("{what} = {value} is outside its admissible range")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("class {class:?} has {available} words but {needed} are required")]
    InsufficientWords {
        class: String,
        needed: usize,
        available: usize,
    },

    #[error("register of {m} sites is too small (need at least {min})")]
    RegisterTooSmall { m: usize, min: usize },

    #[error("register of {m} sites is too large for dense simulation")]
    RegisterTooLarge { m: usize },

    #[error("site {site} is out of range for a register of {m} sites")]
    SiteOutOfRange { site: usize, m: usize },

    #[error("site {0} appears more than once in a Pauli string")]
    DuplicateSite(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("density matrix invariant violated: {0}")]
    InvalidDensityMatrix(String),

    #[error("expectation value has imaginary residue {0:e}")]
    ImaginaryExpectation(f64),

    #[error("observable family fingerprint mismatch: expected {expected}, found {found}")]
    FingerprintMismatch { expected: String, found: String },

    #[error("length mismatch: {left} predictions vs {right} truths")]
    LengthMismatch { left: usize, right: usize },

    #[error("label {0} is neither the positive nor the negative label")]
    UnknownLabel(String),

    #[error("normal equations are not positive definite")]
    NotPositiveDefinite,
}
