use thiserror::Error;

/// Errors raised by kernel, series, factorization and quadrature routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {0} lies outside the domain")]
    PointOutsideDomain(String),
    #[error("kernel evaluation overflows: |1 - <z,w>| = {0:e}")]
    NumericOverflow(f64),
    #[error("unsupported kernel family: {0}")]
    UnsupportedFamily(String),
    #[error("kernel is not CNP: b[{index}] = {value:e}")]
    NotCnp { index: usize, value: f64 },
    #[error("kernel is not normalized: c_0 = {0}")]
    NonNormalized(f64),
    #[error("matrix is not Hermitian at ({row}, {col}): deviation {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },
    #[error("division by zero at point pair ({0}, {1})")]
    DivisionByZero(usize, usize),
    #[error("constraint leaves a trivial subspace")]
    DegenerateConstraint,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("constant term too small to invert: |f_0| = {0:e}")]
    ZeroConstantTerm(f64),
    #[error("operation needs univariate series")]
    NotUnivariate,
    #[error("quadrature budget exceeded: {nodes} nodes > {budget}")]
    QuadratureBudgetExceeded { nodes: usize, budget: usize },
    #[error("function does not have unit norm: ||F|| = {0}")]
    NotUnitNorm(f64),
    #[error("alpha = {0} outside (0, 1)")]
    AlphaOutOfRange(f64),
    #[error("series tail bound {tail:e} too large against partial sum {value:e}")]
    TailTooLarge { tail: f64, value: f64 },
    #[error("target {0:e} beyond the computable range of s_1")]
    TargetOutOfRange(f64),
    #[error("k/s is not positive: quotient coefficient g[{index}] = {value:e}")]
    NoCnpFactor { index: usize, value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
