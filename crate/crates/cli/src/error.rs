use thiserror::Error;

/// Anything that ends a command with exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{name}: {source}")]
    Io {
        name: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{name}: cannot parse: {message}")]
    Parse { name: String, message: String },

    #[error("{0}")]
    Invalid(String),

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Output(String),

    #[error(transparent)]
    Core(#[from] luinv_core::Error),
}

impl CliError {
    pub fn io(name: &str, source: std::io::Error) -> Self {
        Self::Io {
            name: name.to_string(),
            source,
        }
    }

    pub fn parse(name: &str, e: serde_json::Error) -> Self {
        Self::Parse {
            name: name.to_string(),
            message: e.to_string(),
        }
    }
}
