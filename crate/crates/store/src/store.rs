use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use sei_core::{canonical_json, Assessment, AssessmentId, SourceAssessment};

use crate::error::StoreError;
use crate::record::{ArticleMeta, LogRecord, StoredAssessment, VersionRef};
use crate::state::StoreState;

#[derive(Debug, Clone, Copy)]
pub struct StoreOptions {
    /// Call `fsync` after every append.
    pub sync: bool,
}

impl Default for StoreOptions {
    fn default() -> Self {
        StoreOptions { sync: true }
    }
}

/// What happened while opening a store file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpenReport {
    pub records: usize,
    /// Bytes of a torn trailing record that were cut off.
    pub truncated_bytes: u64,
}

#[derive(Debug, Clone, Default)]
pub struct ArticleAttach {
    pub article_id: String,
    pub title: Option<String>,
    pub url: Option<String>,
}

impl ArticleAttach {
    pub fn new(article_id: impl Into<String>) -> Self {
        ArticleAttach {
            article_id: article_id.into(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PutOptions {
    /// Re-assess an existing id (or create one with a chosen id).
    pub id: Option<AssessmentId>,
    /// Head version the caller last saw; 0 means "must be new".
    pub expected_version: Option<u32>,
    pub article: Option<ArticleAttach>,
    /// Fixed timestamp, mainly for reproducible tests.
    pub created_at: Option<DateTime<Utc>>,
}

/// Owner of the store file. Writes take `&mut self`, so callers sharing a
/// store across threads put it behind a lock and get single-writer,
/// multi-reader semantics for free.
#[derive(Debug)]
pub struct Store {
    path: PathBuf,
    file: File,
    state: StoreState,
    options: StoreOptions,
}

impl Store {
    pub fn open(path: impl AsRef<Path>) -> Result<(Store, OpenReport), StoreError> {
        Self::open_with(path, StoreOptions::default())
    }

    pub fn open_with(
        path: impl AsRef<Path>,
        options: StoreOptions,
    ) -> Result<(Store, OpenReport), StoreError> {
        let path = path.as_ref().to_path_buf();
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(&path)?;
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes)?;

        let (state, complete) = replay_bytes(&bytes)?;
        let truncated = (bytes.len() - complete) as u64;
        if truncated > 0 {
            tracing::warn!(path = %path.display(), bytes = truncated, "discarding torn trailing record");
            file.set_len(complete as u64)?;
            file.sync_data()?;
        }
        file.seek(SeekFrom::End(0))?;
        let report = OpenReport {
            records: state.record_count(),
            truncated_bytes: truncated,
        };
        Ok((
            Store {
                path,
                file,
                state,
                options,
            },
            report,
        ))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn state(&self) -> &StoreState {
        &self.state
    }

    /// Appends a new version and returns it as stored.
    pub fn put(
        &mut self,
        assessment: Assessment,
        opts: PutOptions,
    ) -> Result<StoredAssessment, StoreError> {
        let id = opts.id.unwrap_or_else(AssessmentId::new_random);
        let head = self.state.head(id);
        let head_version = head.map_or(0, |h| h.assessment.version);
        if let Some(expected) = opts.expected_version {
            if expected != head_version {
                return Err(StoreError::VersionConflict {
                    id,
                    expected,
                    actual: head_version,
                });
            }
        }
        let article_id = match &opts.article {
            Some(a) => Some(a.article_id.clone()),
            None => head.and_then(|h| h.article_id.clone()),
        };

        let mut lines = Vec::new();
        if let Some(meta) = opts.article.as_ref().and_then(|a| self.article_update(a)) {
            lines.push(LogRecord::Article(meta));
        }
        lines.push(LogRecord::Assessment(StoredAssessment {
            assessment: SourceAssessment {
                id,
                version: head_version + 1,
                created_at: opts.created_at.unwrap_or_else(Utc::now),
                assessment,
            },
            article_id,
            supersedes: (head_version > 0).then_some(VersionRef {
                id,
                version: head_version,
            }),
        }));

        for record in lines {
            self.append(record)?;
        }
        Ok(self.state.head(id).cloned().expect("just stored"))
    }

    /// An article record, if the attachment introduces or changes metadata.
    fn article_update(&self, attach: &ArticleAttach) -> Option<ArticleMeta> {
        let current = self.state.article(&attach.article_id);
        let title = attach
            .title
            .clone()
            .or_else(|| current.map(|a| a.title.clone()))
            .unwrap_or_default();
        let url = attach.url.clone().or_else(|| current.and_then(|a| a.url.clone()));
        let unchanged = current.is_some_and(|a| a.title == title && a.url == url);
        let bare_new = current.is_none() && title.is_empty() && url.is_none();
        (!unchanged && !bare_new).then(|| ArticleMeta {
            article_id: attach.article_id.clone(),
            title,
            url,
        })
    }

    fn append(&mut self, record: LogRecord) -> Result<(), StoreError> {
        self.state
            .check(&record)
            .map_err(|message| StoreError::Corrupt {
                line: self.state.record_count() + 1,
                message,
            })?;
        let mut line = canonical_json(&record)?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        if self.options.sync {
            self.file.sync_data()?;
        }
        self.state.apply(record).expect("checked above");
        Ok(())
    }

    pub fn get(&self, id: AssessmentId, version: Option<u32>) -> Result<&StoredAssessment, StoreError> {
        self.state
            .get(id, version)
            .ok_or(StoreError::NotFound { id, version })
    }

    pub fn list_by_article(&self, article_id: &str) -> Vec<&StoredAssessment> {
        self.state.list_by_article(article_id)
    }

    /// Rebuilds the state from the file on disk without touching it.
    pub fn replay(path: impl AsRef<Path>) -> Result<StoreState, StoreError> {
        let bytes = std::fs::read(path)?;
        Ok(replay_bytes(&bytes)?.0)
    }
}

/// Replays complete lines. Returns the state and the byte length of the
/// complete prefix; anything past it is an unterminated trailing record.
fn replay_bytes(bytes: &[u8]) -> Result<(StoreState, usize), StoreError> {
    let complete = bytes.iter().rposition(|b| *b == b'\n').map_or(0, |i| i + 1);
    let text = std::str::from_utf8(&bytes[..complete]).map_err(|e| StoreError::Corrupt {
        line: bytes[..e.valid_up_to()].iter().filter(|b| **b == b'\n').count() + 1,
        message: "not valid UTF-8".into(),
    })?;
    let mut state = StoreState::default();
    for (i, line) in text.lines().enumerate() {
        let corrupt = |message: String| StoreError::Corrupt { line: i + 1, message };
        let record: LogRecord = serde_json::from_str(line).map_err(|e| corrupt(e.to_string()))?;
        state.apply(record).map_err(corrupt)?;
    }
    Ok((state, complete))
}
