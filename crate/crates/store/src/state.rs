use std::collections::{BTreeMap, HashMap};

use sei_core::AssessmentId;

use crate::record::{ArticleRef, LogRecord, StoredAssessment, VersionRef};

/// The full in-memory view of a store: every version of every assessment
/// and every article attachment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StoreState {
    versions: HashMap<AssessmentId, Vec<StoredAssessment>>,
    order: Vec<AssessmentId>,
    articles: BTreeMap<String, ArticleRef>,
    records: usize,
}

impl StoreState {
    /// Rejects any record that would break version contiguity or the
    /// supersedes chain. The state is unchanged on error.
    pub fn check(&self, record: &LogRecord) -> Result<(), String> {
        let LogRecord::Assessment(stored) = record else {
            return Ok(());
        };
        let id = stored.assessment.id;
        let version = stored.assessment.version;
        let head = self.head_version(id).unwrap_or(0);
        if version != head + 1 {
            return Err(format!("{id} version {version} does not follow {head}"));
        }
        let expected = (head > 0).then_some(VersionRef { id, version: head });
        if stored.supersedes != expected {
            return Err(format!("{id} version {version} has wrong supersedes link"));
        }
        Ok(())
    }

    pub fn apply(&mut self, record: LogRecord) -> Result<(), String> {
        self.check(&record)?;
        self.records += 1;
        match record {
            LogRecord::Article(meta) => {
                let entry = self.article_entry(&meta.article_id);
                entry.title = meta.title;
                entry.url = meta.url;
            }
            LogRecord::Assessment(stored) => {
                let id = stored.assessment.id;
                if let Some(article_id) = stored.article_id.clone() {
                    let entry = self.article_entry(&article_id);
                    if !entry.assessment_ids.contains(&id) {
                        entry.assessment_ids.push(id);
                    }
                }
                let history = self.versions.entry(id).or_default();
                if history.is_empty() {
                    self.order.push(id);
                }
                history.push(stored);
            }
        }
        Ok(())
    }

    fn article_entry(&mut self, article_id: &str) -> &mut ArticleRef {
        self.articles
            .entry(article_id.to_owned())
            .or_insert_with(|| ArticleRef {
                article_id: article_id.to_owned(),
                title: String::new(),
                url: None,
                assessment_ids: Vec::new(),
            })
    }

    pub fn head(&self, id: AssessmentId) -> Option<&StoredAssessment> {
        self.versions.get(&id).and_then(|h| h.last())
    }

    pub fn head_version(&self, id: AssessmentId) -> Option<u32> {
        self.head(id).map(|s| s.assessment.version)
    }

    pub fn get(&self, id: AssessmentId, version: Option<u32>) -> Option<&StoredAssessment> {
        match version {
            None => self.head(id),
            Some(0) => None,
            Some(v) => self.versions.get(&id)?.get(v as usize - 1),
        }
    }

    pub fn history(&self, id: AssessmentId) -> &[StoredAssessment] {
        self.versions.get(&id).map_or(&[], Vec::as_slice)
    }

    /// Assessment ids in first-stored order.
    pub fn ids(&self) -> &[AssessmentId] {
        &self.order
    }

    pub fn article(&self, article_id: &str) -> Option<&ArticleRef> {
        self.articles.get(article_id)
    }

    pub fn articles(&self) -> impl Iterator<Item = &ArticleRef> {
        self.articles.values()
    }

    /// Heads of the assessments attached to an article, in attachment order.
    pub fn list_by_article(&self, article_id: &str) -> Vec<&StoredAssessment> {
        self.articles.get(article_id).map_or_else(Vec::new, |a| {
            a.assessment_ids.iter().filter_map(|id| self.head(*id)).collect()
        })
    }

    /// Number of log records applied.
    pub fn record_count(&self) -> usize {
        self.records
    }
}
