use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right} qubits")]
    LengthMismatch { left: usize, right: usize },

    #[error("parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },

    #[error("inconsistent signs: -1 is generated by the stabilizer group")]
    MinusIdentityInStabilizer,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("code has no lattice geometry")]
    GeometryMissing,

    #[error("operation requires a stabilizer code (S = G)")]
    NotStabilizerCode,

    #[error("operation requires a CSS stabilizer code")]
    NotCss,

    #[error("operator is not a {0} logical operator")]
    NotLogical(&'static str),

    #[error("phase polynomial modulus mismatch: 2^{0} vs 2^{1}")]
    ModulusMismatch(u32, u32),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("curves do not cross inside the sampled range")]
    NoCrossing,

    #[error("regions do not cover all qubits ({missing} uncovered)")]
    NotCovering { missing: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: Option<usize>, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
