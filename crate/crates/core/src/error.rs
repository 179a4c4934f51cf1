use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("composition {0} has no leading part")]
    EmptyComposition(String),

    #[error("composition {composition} is not in W_{size}")]
    NotInFamily { composition: String, size: usize },

    #[error("composition {composition} has no suffix of size b+2 or b+3 (b = {b})")]
    NotFactorable { composition: String, b: usize },

    #[error("b must be at least 1, got {0}")]
    InvalidB(usize),

    #[error("every leg must have length at least 1, got ({0}, {1}, {2})")]
    InvalidLegs(usize, usize, usize),

    #[error("a cycle needs at least 3 vertices, got {0}")]
    CycleTooSmall(usize),

    #[error("invalid edge ({0}, {1}) for a graph on {2} vertices")]
    InvalidEdge(usize, usize, usize),

    #[error("oracle budget exceeded: 2^{edges} edge subsets exceeds the limit of {budget}")]
    OracleBudget { edges: usize, budget: u64 },

    #[error("vertices ({0}, {1}, {2}) do not form a stable triple")]
    NotStable(usize, usize, usize),

    #[error("non-integral coefficient {coeff} at {index}")]
    NonIntegral { index: String, coeff: String },

    #[error("malformed charge group: {0}")]
    MalformedGroup(String),

    #[error("{0}")]
    Usage(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
