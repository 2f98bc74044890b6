use thiserror::Error;

/// Failures of a CLI run, each mapped to a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(hciz_core::Error),
    #[error("cannot write `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Domain(_) => 2,
            CliError::Io { .. } => 74,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Domain(_) => "domain",
            CliError::Io { .. } => "io",
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

/// Parse failures inside the core are usage errors; everything else is a domain error.
impl From<hciz_core::Error> for CliError {
    fn from(e: hciz_core::Error) -> Self {
        match e {
            hciz_core::Error::Parse(msg) => CliError::Usage(msg),
            other => CliError::Domain(other),
        }
    }
}
