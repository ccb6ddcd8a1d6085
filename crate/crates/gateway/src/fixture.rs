use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use async_trait::async_trait;
use sei_core::CitationProfile;
use sei_registry::normalize_channel_name;

use crate::error::GatewayError;
use crate::provider::MetadataProvider;
use crate::record::{encode_component, AuthorDocument, AuthorRef, Doi, PublicationRecord};

/// Serves publications and authors from a directory:
///
/// ```text
/// <root>/publications/<percent-encoded doi>.json
/// <root>/authors/<percent-encoded author id>.json
/// ```
#[derive(Debug, Clone)]
pub struct FixtureProvider {
    root: PathBuf,
}

impl FixtureProvider {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn publication_path(&self, doi: &Doi) -> PathBuf {
        self.root
            .join("publications")
            .join(format!("{}.json", doi.encoded()))
    }

    pub fn author_path(&self, id: &str) -> PathBuf {
        self.root
            .join("authors")
            .join(format!("{}.json", encode_component(id)))
    }

    /// Raw bytes of a publication document.
    pub async fn publication_bytes(&self, doi: &Doi) -> Result<Vec<u8>, GatewayError> {
        read(&self.publication_path(doi), || format!("publication {doi}")).await
    }

    /// Raw bytes of an author document.
    pub async fn author_bytes(&self, id: &str) -> Result<Vec<u8>, GatewayError> {
        if id.is_empty() {
            return Err(GatewayError::NotFound("author with empty id".into()));
        }
        read(&self.author_path(id), || format!("author {id}")).await
    }

    /// All authors whose normalized name equals the normalized query, ordered by id.
    pub async fn search_authors(&self, name: &str) -> Result<Vec<AuthorDocument>, GatewayError> {
        let key = normalize_channel_name(name);
        if key.is_empty() {
            return Ok(Vec::new());
        }
        let dir = self.root.join("authors");
        let mut entries = match tokio::fs::read_dir(&dir).await {
            Ok(e) => e,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(io_error(&dir, e)),
        };
        let mut found = Vec::new();
        while let Some(entry) = entries.next_entry().await.map_err(|e| io_error(&dir, e))? {
            let path = entry.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let bytes = tokio::fs::read(&path).await.map_err(|e| io_error(&path, e))?;
            let doc: AuthorDocument = parse(&bytes, &path.display().to_string())?;
            if normalize_channel_name(&doc.name) == key {
                found.push(doc);
            }
        }
        found.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(found)
    }
}

/// Resolves a name search to exactly one author.
pub(crate) fn single_match(
    name: &str,
    mut docs: Vec<AuthorDocument>,
) -> Result<AuthorDocument, GatewayError> {
    match docs.len() {
        0 => Err(GatewayError::NotFound(format!("author named `{name}`"))),
        1 => Ok(docs.remove(0)),
        _ => Err(GatewayError::AmbiguousAuthor {
            name: name.to_owned(),
            candidates: docs.iter().map(AuthorDocument::candidate).collect(),
        }),
    }
}

pub(crate) fn parse<T: serde::de::DeserializeOwned>(
    bytes: &[u8],
    what: &str,
) -> Result<T, GatewayError> {
    serde_json::from_slice(bytes).map_err(|e| GatewayError::MalformedPayload(format!("{what}: {e}")))
}

async fn read(path: &Path, what: impl FnOnce() -> String) -> Result<Vec<u8>, GatewayError> {
    match tokio::fs::read(path).await {
        Ok(b) => Ok(b),
        Err(e) if e.kind() == ErrorKind::NotFound => Err(GatewayError::NotFound(what())),
        Err(e) => Err(io_error(path, e)),
    }
}

fn io_error(path: &Path, e: std::io::Error) -> GatewayError {
    GatewayError::Transport {
        attempts: 1,
        message: format!("{}: {e}", path.display()),
    }
}

#[async_trait]
impl MetadataProvider for FixtureProvider {
    async fn fetch_publication(&self, doi: &Doi) -> Result<PublicationRecord, GatewayError> {
        let bytes = self.publication_bytes(doi).await?;
        let record: PublicationRecord = parse(&bytes, &format!("publication {doi}"))?;
        if &record.doi != doi {
            return Err(GatewayError::MalformedPayload(format!(
                "fixture for {doi} describes {}",
                record.doi
            )));
        }
        Ok(record)
    }

    async fn fetch_author_citations(
        &self,
        author: &AuthorRef,
    ) -> Result<CitationProfile, GatewayError> {
        let doc = match &author.provider_author_id {
            Some(id) => {
                let bytes = self.author_bytes(id).await?;
                parse::<AuthorDocument>(&bytes, &format!("author {id}"))?
            }
            None => single_match(&author.name, self.search_authors(&author.name).await?)?,
        };
        doc.into_profile()
    }

    fn describe(&self) -> String {
        format!("fixture:{}", self.root.display())
    }
}
