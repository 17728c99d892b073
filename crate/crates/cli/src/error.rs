use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error("schema error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error in `{key}`: {message}")]
    Schema { key: String, message: String },
    #[error("expression error in `{key}`: {source}")]
    Expression {
        key: String,
        #[source]
        source: mvfix::ParseError,
    },
    #[error("construction error: {0}")]
    Construction(String),
    #[error(transparent)]
    Core(#[from] mvfix::Error),
    #[error("trace csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e.to_string())
    }
}
