use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain [{lo}, {hi}]: need finite lo < hi")]
    InvalidDomain { lo: f64, hi: f64 },

    #[error("slope bound violated at t = {t}: |phi'(t)| = {slope} exceeds {limit}")]
    SlopeBound { t: f64, slope: f64, limit: f64 },

    #[error("derivative is not {lambda}-bilipschitz between t = {s} and t = {t}")]
    Bilipschitz { lambda: f64, s: f64, t: f64 },

    #[error("bilipschitz constant {0} outside [1, 2^35]")]
    LambdaRange(f64),

    #[error("parameter t = {t} outside the curve domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("inverted interval ({lo}, {hi})")]
    InvertedInterval { lo: f64, hi: f64 },

    #[error("generation {n} outside the supported range 0..={max}")]
    GenerationOutOfRange { n: u32, max: u32 },

    #[error("empty digit set")]
    EmptyDigitSet,

    #[error("digit {digit} is not a valid base-{base} digit")]
    DigitOutOfRange { digit: u32, base: u32 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("scale index {index} outside 1..={len}")]
    ScaleIndex { index: i64, len: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }
}
