use thiserror::Error;

pub type Result<T, E = VsaError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum VsaError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("operands were built for different grid configurations")]
    ConfigMismatch,

    #[error("shape mismatch: expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("not a pure vector: module {module} has fundamental amplitude {amplitude:.4}")]
    NotPure { module: usize, amplitude: f64 },

    #[error("zero-norm vector")]
    ZeroNorm,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("imaginary residue {0:.3e} after inverse transform exceeds tolerance")]
    ImaginaryResidue(f64),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("duplicate codebook key {0}")]
    DuplicateKey(String),

    #[error("unknown key {0}")]
    UnknownKey(String),

    #[error("codebook would hold {requested} entries, limit is {limit}")]
    CodebookTooLarge { requested: usize, limit: usize },

    #[error("angle undecodable: profile peak-to-mean ratio {0:.3} is below 1.2")]
    AngleUndecodable(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed codebook container: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
