use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Schubert index {elems:?} in [{n}]: {reason}")]
    InvalidIndex {
        n: usize,
        elems: Vec<usize>,
        reason: &'static str,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("partition {partition} does not fit in a {rows}x{cols} rectangle")]
    RectangleOverflow {
        partition: String,
        rows: usize,
        cols: usize,
    },
    #[error("classes live in different Grassmannians: Gr({0},{1}) vs Gr({2},{3})")]
    RectangleMismatch(usize, usize, usize, usize),
    #[error("tuple shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dimension identity violated: {lhs} != {rhs}")]
    IdentityViolation { lhs: i64, rhs: i64 },
    #[error("partition {partition} is wider than {width}")]
    WidthOverflow { partition: String, width: usize },
    #[error("partition {partition} has more than {rows} parts")]
    TooManyParts { partition: String, rows: usize },
    #[error("recursion depth {requested} exceeds bound {bound}")]
    DepthExceeded { requested: usize, bound: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("genericity failure: {0}")]
    GenericityFailure(String),
    #[error("no contradictor candidate passed the point-class check")]
    CandidatesExhausted,
    #[error("enumeration of {requested} points exceeds limit {limit}")]
    SizeExceeded { requested: u128, limit: u128 },
    #[error("expected dimension is {0}, a zero-dimensional problem is required")]
    NotZeroDimensional(i64),
    #[error("point counting supports fields of size 2, 3 or 5, not {0}")]
    UnsupportedField(u64),
    #[error("weights for factor {0} are not weakly decreasing")]
    InvalidWeights(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
