use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("NaN encountered in tensor data")]
    NaN,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("not compactly embedded: {condition} evaluates to {value}, which is not > 0")]
    NotCompact { condition: String, value: String },
    #[error("exponent pattern violated: {0}")]
    Pattern(String),
    #[error("index {t} is not in J = {allowed:?}")]
    NotInJ { t: usize, allowed: Vec<usize> },
    #[error("desk-scale guard: {0}")]
    DeskScale(String),
    #[error("rank deficient basis: smallest singular value {0:e}")]
    RankDeficient(f64),
    #[error("aliasing: {0}")]
    Aliasing(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("not a member of the class: {0}")]
    NotMember(String),
    #[error("window violated: {0}")]
    Window(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}
