use sei_core::AssessmentId;

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("store I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("store file corrupt at line {line}: {message}")]
    Corrupt { line: usize, message: String },
    #[error("version conflict on {id}: expected head {expected}, found {actual}")]
    VersionConflict {
        id: AssessmentId,
        expected: u32,
        actual: u32,
    },
    #[error("assessment {id} not found")]
    NotFound { id: AssessmentId, version: Option<u32> },
    #[error("could not encode record: {0}")]
    Encode(#[from] serde_json::Error),
}
