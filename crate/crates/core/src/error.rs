use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operands live in different variable sets")]
    VarSetMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("series has a nonzero constant term")]
    NonZeroConstant,
    #[error("{0}")]
    Domain(String),
    #[error("routes disagree for {what}: {detail}")]
    RouteMismatch { what: String, detail: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
