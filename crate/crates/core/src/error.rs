use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live over different moduli or field contexts.
    #[error("mismatched field parameters: {0}")]
    ModulusMismatch(&'static str),

    #[error("division by zero")]
    DivisionByZero,

    /// A trace left GF(p^2); the extension context is inconsistent.
    #[error("corrupted field context: {0}")]
    CorruptField(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter generation failed: {0}")]
    GenerationFailed(String),

    /// The blinding factor derived from Tr(g^{bx}) vanished mod q.
    #[error("degenerate blinding factor; draw a fresh exponent")]
    BlindingDegenerate,

    #[error("corrupt ciphertext: blinding factor is zero")]
    CorruptCiphertext,

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("public shadow already registered; regenerate the key pair")]
    ShadowCollision,

    #[error("identity error: {0}")]
    Identity(String),

    #[error("insufficient shares: need {needed}, have {got}")]
    InsufficientShares { needed: usize, got: usize },

    #[error("cheating detected: {}", ids.join(", "))]
    CheaterIdentified { ids: Vec<String> },

    #[error("malformed bulletin at index {index}: {reason}")]
    MalformedBulletin { index: u64, reason: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
