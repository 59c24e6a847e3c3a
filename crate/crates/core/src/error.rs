use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature order must be at least {min}, got {got}")]
    QuadratureOrder { got: usize, min: usize },

    #[error("degree {degree} outside 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("Gegenbauer parameter {0} must satisfy lambda > -1/2 and lambda != 0")]
    InvalidLambda(f64),

    #[error("operation requires lambda > 0, got {0}")]
    NonPositiveLambda(f64),

    #[error("operation requires lambda >= 1/2, got {0}")]
    LambdaBelowHalf(f64),

    #[error("transform angle {0} outside the admissible range")]
    AngleOutOfRange(f64),

    #[error("wave index {k} outside -{big_n}..={big_n}")]
    WaveIndexOutOfRange { k: i64, big_n: usize },

    #[error("polynomial degree m = {m} exceeds 2N = {}", 2 * .big_n)]
    DegreeExceedsModes { m: usize, big_n: usize },

    #[error("truncation order N must be at least 1")]
    ZeroModes,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is numerically rank deficient (sigma_min / sigma_max = {ratio:e})")]
    RankDeficient { ratio: f64 },

    #[error("empty matrix")]
    EmptyMatrix,

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("breakpoints must be sorted, distinct and inside (-1, 1)")]
    InvalidBreakpoints,

    #[error("expected {expected} piece evaluators, got {got}")]
    PieceCount { expected: usize, got: usize },

    #[error("singularity {re}{im:+}i lies on the interval [{a}, {b}]")]
    SingularityOnInterval { re: f64, im: f64, a: f64, b: f64 },

    #[error("evaluation grid is empty")]
    EmptyGrid,

    #[error("unknown test function `{0}`")]
    UnknownFunction(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("corpus self-check failed: {0}")]
    CorpusCheck(String),

    #[error("job (function={function}, alpha={alpha}, lambda={lambda}, m={m}) failed: {source}")]
    Job {
        function: String,
        alpha: f64,
        lambda: f64,
        m: usize,
        source: Box<Error>,
    },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
