use thiserror::Error;

use crate::record::AuthorCandidate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GatewayError {
    #[error("invalid DOI `{0}`")]
    InvalidDoi(String),
    #[error("{0} not found")]
    NotFound(String),
    #[error("author name `{name}` matches {} candidates", candidates.len())]
    AmbiguousAuthor {
        name: String,
        candidates: Vec<AuthorCandidate>,
    },
    #[error("transport failure after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("upstream answered with status {0}")]
    UpstreamStatus(u16),
    #[error("malformed upstream payload: {0}")]
    MalformedPayload(String),
    #[error("invalid provider configuration: {0}")]
    Config(String),
}

impl GatewayError {
    /// Errors worth retrying: the request never got a definitive answer.
    pub fn is_transient(&self) -> bool {
        matches!(self, GatewayError::Transport { .. })
    }
}
