use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// Each variant maps onto one of the message prefixes the CLI prints, so the
/// prefix alone tells a user which stage failed.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("aggregation error: {0}")]
    Aggregation(String),

    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("grouping error: {0}")]
    Grouping(String),

    #[error("degrees-of-freedom error: {0}")]
    DegreesOfFreedom(String),

    #[error("insufficient data: {n} rows for {p} parameters")]
    InsufficientData { n: usize, p: usize },

    #[error("singular design: column `{column}` is linearly dependent on earlier columns")]
    SingularDesign { column: String },

    #[error("degenerate interval: {0}")]
    DegenerateInterval(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("unknown format `{0}`")]
    UnknownFormat(String),

    #[error("input error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
