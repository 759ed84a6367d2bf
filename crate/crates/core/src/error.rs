use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("cannot parse rational `{0}`")]
    Parse(String),

    #[error("series divisor has zero constant term")]
    SeriesDivision,

    #[error("inner series of a composition must have zero constant term")]
    Composition,

    #[error("binomial power needs a base with constant term 1")]
    BinomialPowDomain,

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("certification at n = {n} needs {needed} distinct {var} points, got {got}")]
    InsufficientPoints {
        n: usize,
        var: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate:e}, error {error:e})")]
    Quadrature {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },
}
