use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid scenario: {0}")]
    Invariant(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Quadrature(_) => 4,
        }
    }
}

impl From<halfspace::Error> for CliError {
    fn from(e: halfspace::Error) -> Self {
        use halfspace::Error as E;
        match e {
            E::SlowConvergence { .. } | E::QuadratureTolerance { .. } => CliError::Quadrature(e.to_string()),
            E::InvalidMedium(_) | E::InvalidInput(_) | E::Coincidence { .. } => CliError::Invariant(e.to_string()),
        }
    }
}
