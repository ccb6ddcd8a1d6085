use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use async_trait::async_trait;
use sei_core::CitationProfile;
use serde::{Deserialize, Serialize};

use crate::cache::CachedProvider;
use crate::error::GatewayError;
use crate::fixture::FixtureProvider;
use crate::http::HttpProvider;
use crate::record::{AuthorRef, Doi, PublicationRecord};

/// A source of publication metadata. Implementations must be safe to call
/// concurrently.
#[async_trait]
pub trait MetadataProvider: Send + Sync {
    async fn fetch_publication(&self, doi: &Doi) -> Result<PublicationRecord, GatewayError>;

    /// Looks an author up by provider id when present, otherwise by name.
    /// A name that matches several authors is an error listing them all.
    async fn fetch_author_citations(
        &self,
        author: &AuthorRef,
    ) -> Result<CitationProfile, GatewayError>;

    /// Short description for health reporting.
    fn describe(&self) -> String;
}

#[async_trait]
impl<P: MetadataProvider + ?Sized> MetadataProvider for Arc<P> {
    async fn fetch_publication(&self, doi: &Doi) -> Result<PublicationRecord, GatewayError> {
        (**self).fetch_publication(doi).await
    }

    async fn fetch_author_citations(
        &self,
        author: &AuthorRef,
    ) -> Result<CitationProfile, GatewayError> {
        (**self).fetch_author_citations(author).await
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProviderKind {
    Fixture,
    Http,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProviderConfig {
    pub kind: ProviderKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture_root: Option<PathBuf>,
    #[serde(default = "defaults::timeout_ms")]
    pub timeout_ms: u64,
    #[serde(default = "defaults::max_retries")]
    pub max_retries: u32,
    #[serde(default = "defaults::backoff_base_ms")]
    pub backoff_base_ms: u64,
    #[serde(default = "defaults::cache_ttl_secs")]
    pub cache_ttl_secs: u64,
}

mod defaults {
    pub fn timeout_ms() -> u64 {
        10_000
    }
    pub fn max_retries() -> u32 {
        3
    }
    pub fn backoff_base_ms() -> u64 {
        250
    }
    pub fn cache_ttl_secs() -> u64 {
        300
    }
}

impl ProviderConfig {
    pub fn fixture(root: impl Into<PathBuf>) -> Self {
        Self {
            kind: ProviderKind::Fixture,
            base_url: None,
            fixture_root: Some(root.into()),
            ..Self::http_defaults()
        }
    }

    pub fn http(base_url: impl Into<String>) -> Self {
        Self {
            base_url: Some(base_url.into()),
            ..Self::http_defaults()
        }
    }

    fn http_defaults() -> Self {
        Self {
            kind: ProviderKind::Http,
            base_url: None,
            fixture_root: None,
            timeout_ms: defaults::timeout_ms(),
            max_retries: defaults::max_retries(),
            backoff_base_ms: defaults::backoff_base_ms(),
            cache_ttl_secs: defaults::cache_ttl_secs(),
        }
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_millis(self.timeout_ms)
    }

    pub fn backoff_base(&self) -> Duration {
        Duration::from_millis(self.backoff_base_ms)
    }

    pub fn cache_ttl(&self) -> Duration {
        Duration::from_secs(self.cache_ttl_secs)
    }

    pub fn validate(&self) -> Result<(), GatewayError> {
        match self.kind {
            ProviderKind::Fixture if self.fixture_root.is_none() => Err(GatewayError::Config(
                "fixture provider requires fixture_root".into(),
            )),
            ProviderKind::Http if self.base_url.is_none() => Err(GatewayError::Config(
                "http provider requires base_url".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Builds the configured provider behind a TTL cache.
pub fn build_provider(config: &ProviderConfig) -> Result<Arc<dyn MetadataProvider>, GatewayError> {
    config.validate()?;
    let ttl = config.cache_ttl();
    Ok(match config.kind {
        ProviderKind::Fixture => {
            let root = config.fixture_root.clone().expect("validated");
            Arc::new(CachedProvider::new(FixtureProvider::new(root), ttl))
        }
        ProviderKind::Http => Arc::new(CachedProvider::new(HttpProvider::new(config)?, ttl)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_requires_its_location() {
        let mut c = ProviderConfig::fixture("/tmp");
        assert!(c.validate().is_ok());
        c.fixture_root = None;
        assert!(matches!(c.validate(), Err(GatewayError::Config(_))));
        let mut c = ProviderConfig::http("http://localhost:1");
        assert!(c.validate().is_ok());
        c.base_url = None;
        assert!(build_provider(&c).is_err());
    }

    #[test]
    fn defaults_from_toml_like_json() {
        let c: ProviderConfig =
            serde_json::from_str(r#"{"kind":"http","base_url":"http://x"}"#).unwrap();
        assert_eq!(c.max_retries, 3);
        assert_eq!(c.backoff_base(), Duration::from_millis(250));
    }
}
