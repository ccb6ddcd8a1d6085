use sei_core::{AssessmentId, SourceAssessment};
use serde::{Deserialize, Serialize};

/// Points at one immutable version of an assessment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VersionRef {
    pub id: AssessmentId,
    pub version: u32,
}

/// One stored version. `supersedes` names the previous version, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredAssessment {
    pub assessment: SourceAssessment,
    #[serde(default)]
    pub article_id: Option<String>,
    #[serde(default)]
    pub supersedes: Option<VersionRef>,
}

impl StoredAssessment {
    pub fn version_ref(&self) -> VersionRef {
        VersionRef {
            id: self.assessment.id,
            version: self.assessment.version,
        }
    }
}

/// Title and link of an article, written when first seen or changed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleMeta {
    pub article_id: String,
    pub title: String,
    #[serde(default)]
    pub url: Option<String>,
}

/// An article with the assessments attached to it, in attachment order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRef {
    pub article_id: String,
    pub title: String,
    pub url: Option<String>,
    pub assessment_ids: Vec<AssessmentId>,
}

/// A line of the store file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "record", rename_all = "snake_case")]
pub enum LogRecord {
    Assessment(StoredAssessment),
    Article(ArticleMeta),
}
