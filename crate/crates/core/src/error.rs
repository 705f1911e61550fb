use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operation requires nonempty set operands")]
    EmptyOperand,
    #[error("dilation scale must be nonzero")]
    ZeroScale,
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("invalid coefficient tuple: {0}")]
    InvalidTuple(String),
    #[error("modulus must be positive, got {0}")]
    NonpositiveModulus(String),
    #[error("output span of {needed} bits exceeds the bit budget of {budget}")]
    WindowOverflow { needed: u128, budget: u64 },
    #[error("need at least two summands, got {0}")]
    KTooSmall(usize),
    #[error("u = {u} lies outside [{lo}, {hi}]")]
    URange { u: u64, lo: u64, hi: u64 },
    #[error("index out of range: {0}")]
    IndexRange(String),
    #[error("set {0} is not reduced")]
    NotReduced(String),
    #[error("set is not fully distributed mod {modulus}")]
    FdHypothesisFails { modulus: u64 },
    #[error("hypothesis fails: {0}")]
    HypothesisFails(String),
    #[error("search needs sets of at least two elements, got {0}")]
    SetTooSmall(usize),
    #[error("window {window} is too small for sets of size {n}")]
    WindowTooSmall { n: usize, window: u64 },
    #[error("search space of {needed} candidates exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
