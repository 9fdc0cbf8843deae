use thiserror::Error;

/// Failures of a CLI run, each mapped to a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("({lambda}, {e2}) is not in the moduli space (region {region})")]
    Outside {
        lambda: f64,
        e2: f64,
        region: String,
    },

    #[error("q = {q} is outside J = ({lo}, {hi})")]
    OutOfInterval { q: String, lo: f64, hi: f64 },

    #[error("{0}")]
    Numeric(String),

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Outside { .. } => 2,
            CliError::OutOfInterval { .. } => 3,
            CliError::Usage(_) => 64,
            CliError::Numeric(_) | CliError::Io { .. } => 65,
        }
    }
}

impl From<halfelastica::Error> for CliError {
    fn from(e: halfelastica::Error) -> Self {
        match e {
            halfelastica::Error::OutsideModuli { lambda, e2 } => CliError::Outside {
                lambda,
                e2,
                region: halfelastica::moduli::classify_region(lambda, e2)
                    .region
                    .to_string(),
            },
            halfelastica::Error::OutOfInterval { q, lo, hi } => CliError::OutOfInterval {
                q: q.to_string(),
                lo,
                hi,
            },
            other => CliError::Numeric(other.to_string()),
        }
    }
}
