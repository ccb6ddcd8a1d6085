use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from the core operations when called with out-of-domain input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("invalid BFI level {0}: expected 0, 1, 2 or 3")]
    InvalidBfiLevel(i64),
    #[error("invalid method rank {0}: expected 1 to 7")]
    InvalidMethodRank(i64),
    #[error("negative citation count {value} at position {index}")]
    NegativeCitation { index: usize, value: i64 },
    #[error("author list is empty")]
    EmptyAuthorList,
    #[error("author profile `{0}` has neither citation counts nor a precomputed h-index")]
    ProfileWithoutData(String),
    #[error("author profile `{name}` states h-index {stated} but its citations give {computed}")]
    PrecomputedHMismatch {
        name: String,
        stated: u32,
        computed: u32,
    },
    #[error("remark text is empty")]
    EmptyRemark,
    #[error("stored assessment is incoherent: {0}")]
    IncoherentAssessment(String),
}

/// Machine-readable validation codes. The string forms are part of the
/// public contract of the CLI and the HTTP service.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCode {
    MissingRemarkForUnreviewed,
    MissingBfiLevel,
    InvalidBfiLevel,
    MissingMethodRank,
    InvalidMethodRank,
    MissingTeamEvidence,
    EmptyAuthorList,
    ProfileWithoutData,
    NegativeCitationCount,
    NegativeHIndex,
    PrecomputedHMismatch,
    TeamMaxHMismatch,
    EmptyRemarkText,
    ConflictingChannelInput,
    MalformedIssn,
    UnclassifiedMethod,
    MalformedHIndex,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::MissingRemarkForUnreviewed => "MISSING_REMARK_FOR_UNREVIEWED",
            ErrorCode::MissingBfiLevel => "MISSING_BFI_LEVEL",
            ErrorCode::InvalidBfiLevel => "INVALID_BFI_LEVEL",
            ErrorCode::MissingMethodRank => "MISSING_METHOD_RANK",
            ErrorCode::InvalidMethodRank => "INVALID_METHOD_RANK",
            ErrorCode::MissingTeamEvidence => "MISSING_TEAM_EVIDENCE",
            ErrorCode::EmptyAuthorList => "EMPTY_AUTHOR_LIST",
            ErrorCode::ProfileWithoutData => "PROFILE_WITHOUT_DATA",
            ErrorCode::NegativeCitationCount => "NEGATIVE_CITATION_COUNT",
            ErrorCode::NegativeHIndex => "NEGATIVE_H_INDEX",
            ErrorCode::PrecomputedHMismatch => "PRECOMPUTED_H_MISMATCH",
            ErrorCode::TeamMaxHMismatch => "TEAM_MAX_H_MISMATCH",
            ErrorCode::EmptyRemarkText => "EMPTY_REMARK_TEXT",
            ErrorCode::ConflictingChannelInput => "CONFLICTING_CHANNEL_INPUT",
            ErrorCode::MalformedIssn => "MALFORMED_ISSN",
            ErrorCode::UnclassifiedMethod => "UNCLASSIFIED_METHOD",
            ErrorCode::MalformedHIndex => "MALFORMED_H_INDEX",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One violated validation rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    pub code: ErrorCode,
    /// Path of the offending input field, e.g. `authors[1].citations`.
    pub field: String,
    pub message: String,
}

impl ValidationIssue {
    pub fn new(code: ErrorCode, field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code,
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Every rule a draft violated, in the order the rules were checked.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValidationErrors(pub Vec<ValidationIssue>);

impl ValidationErrors {
    pub fn push(&mut self, issue: ValidationIssue) {
        self.0.push(issue);
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn codes(&self) -> Vec<ErrorCode> {
        self.0.iter().map(|i| i.code).collect()
    }

    pub fn contains(&self, code: ErrorCode) -> bool {
        self.0.iter().any(|i| i.code == code)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ValidationIssue> {
        self.0.iter()
    }
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} ({}): {}", issue.code, issue.field, issue.message)?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationErrors {}

impl Extend<ValidationIssue> for ValidationErrors {
    fn extend<T: IntoIterator<Item = ValidationIssue>>(&mut self, iter: T) {
        self.0.extend(iter);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_names_match_as_str() {
        let all = [
            ErrorCode::MissingRemarkForUnreviewed,
            ErrorCode::MissingBfiLevel,
            ErrorCode::InvalidBfiLevel,
            ErrorCode::MissingMethodRank,
            ErrorCode::InvalidMethodRank,
            ErrorCode::MissingTeamEvidence,
            ErrorCode::EmptyAuthorList,
            ErrorCode::ProfileWithoutData,
            ErrorCode::NegativeCitationCount,
            ErrorCode::NegativeHIndex,
            ErrorCode::PrecomputedHMismatch,
            ErrorCode::TeamMaxHMismatch,
            ErrorCode::EmptyRemarkText,
            ErrorCode::ConflictingChannelInput,
            ErrorCode::MalformedIssn,
            ErrorCode::UnclassifiedMethod,
            ErrorCode::MalformedHIndex,
        ];
        for code in all {
            let json = serde_json::to_string(&code).unwrap();
            assert_eq!(json, format!("\"{}\"", code.as_str()));
            assert_eq!(serde_json::from_str::<ErrorCode>(&json).unwrap(), code);
        }
    }
}
