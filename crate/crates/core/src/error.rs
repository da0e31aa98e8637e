use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("truncation check failed: tail norm {tail:.3e} over the last {guard} levels exceeds {threshold:.3e}")]
    Truncation {
        tail: f64,
        guard: usize,
        threshold: f64,
    },

    #[error("coefficient normalization violated: sum of |c_m|^2 = {sum} > 1")]
    Normalization { sum: f64 },

    #[error("negative action J[{index}] = {value}")]
    NegativeAction { index: usize, value: f64 },

    #[error("singular point: J[{index}] = {value} does not exceed step {step}")]
    SingularPoint { index: usize, value: f64, step: f64 },

    #[error("point has {got} canonical pairs, family {family} expects {expected}")]
    WrongArity {
        family: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("expectation value has imaginary part {imag:.3e}")]
    NonRealExpectation { imag: f64 },

    #[error("integrator failed at t = {t}: step size {step:.3e} below minimum")]
    StepFailure { t: f64, step: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty series")]
    EmptySeries,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("family {family}: {source}")]
    InFamily {
        family: crate::trial::FamilyKind,
        source: Box<Error>,
    },

    #[error("i/o: {0}")]
    Io(String),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code for the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 3,
        }
    }
}
