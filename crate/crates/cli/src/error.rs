use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed configuration or parameters; exit code 2.
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
