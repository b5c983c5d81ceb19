use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: String, reason: String },

    #[error("point (x = {x}, t = {t}) lies outside the domain of {what}")]
    Domain { what: String, x: f64, t: f64 },

    #[error("{what} is not positive at (x = {x}, t = {t}): value {value:e}")]
    Positivity {
        what: String,
        x: f64,
        t: f64,
        value: f64,
    },

    #[error("cannot parse seed spec at token `{token}`: {reason}")]
    SeedParse { token: String, reason: String },

    #[error("quadrature did not converge: estimated error {estimate:e} exceeds tolerance {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("linear solve failed at step {step}: {reason}")]
    LinearSolve { step: usize, reason: String },

    #[error("evolution unstable at t = {t}: max |value| grew by {growth:e} (limit {limit:e})")]
    Instability { t: f64, growth: f64, limit: f64 },

    #[error("configuration error in {location}: {message}")]
    Config { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parameter(name: &str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(what: &str, x: f64, t: f64) -> Self {
        Error::Domain {
            what: what.to_string(),
            x,
            t,
        }
    }
}
