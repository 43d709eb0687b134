use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid medium: {0}")]
    InvalidMedium(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("points coincide (distance {distance:e})")]
    Coincidence { distance: f64 },

    #[error("x3 + y3 = {height:e} is below the minimum height {minimum:e}; the spectral integral no longer decays")]
    SlowConvergence { height: f64, minimum: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e}; achieved estimate {estimate:e}")]
    QuadratureTolerance { tolerance: f64, estimate: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
