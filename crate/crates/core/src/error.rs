use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Fock cutoff must be at least 1, got {0}")]
    InvalidCutoff(usize),

    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dense exponential of a {dim}x{dim} matrix exceeds the cap of {cap}")]
    ExpmTooLarge { dim: usize, cap: usize },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("operands use different generator sets")]
    GeneratorMismatch,

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("invalid generator set: {0}")]
    InvalidGenerators(String),

    #[error("expected an odd Grassmann element")]
    NotOdd,

    #[error("series did not terminate within {max_order} powers")]
    NotNilpotent { max_order: usize },

    #[error("operands act on different Fock spaces ({0} vs {1} modes)")]
    ModeMismatch(usize, usize),

    #[error("sampler failed to reach energy {target} within {iterations} bisection steps")]
    SamplerFailed { target: f64, iterations: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
