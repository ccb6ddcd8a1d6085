use std::collections::HashMap;
use std::hash::Hash;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use async_trait::async_trait;
use sei_core::CitationProfile;

use crate::error::GatewayError;
use crate::provider::MetadataProvider;
use crate::record::{AuthorRef, Doi, PublicationRecord};

struct TtlMap<K, V> {
    entries: Mutex<HashMap<K, (Instant, V)>>,
}

impl<K: Eq + Hash + Clone, V: Clone> TtlMap<K, V> {
    fn new() -> Self {
        Self {
            entries: Mutex::new(HashMap::new()),
        }
    }

    fn get(&self, key: &K, ttl: Duration) -> Option<V> {
        let map = self.entries.lock().unwrap();
        map.get(key)
            .filter(|(at, _)| at.elapsed() < ttl)
            .map(|(_, v)| v.clone())
    }

    fn put(&self, key: K, value: V) {
        self.entries.lock().unwrap().insert(key, (Instant::now(), value));
    }
}

/// Caches successful lookups of an inner provider for `ttl`. Errors are
/// never cached. A zero TTL disables caching.
pub struct CachedProvider<P> {
    inner: P,
    ttl: Duration,
    publications: TtlMap<Doi, PublicationRecord>,
    authors: TtlMap<AuthorRef, CitationProfile>,
    upstream_calls: AtomicU64,
}

impl<P: MetadataProvider> CachedProvider<P> {
    pub fn new(inner: P, ttl: Duration) -> Self {
        Self {
            inner,
            ttl,
            publications: TtlMap::new(),
            authors: TtlMap::new(),
            upstream_calls: AtomicU64::new(0),
        }
    }

    /// Number of calls forwarded to the inner provider.
    pub fn upstream_calls(&self) -> u64 {
        self.upstream_calls.load(Ordering::Relaxed)
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }
}

#[async_trait]
impl<P: MetadataProvider> MetadataProvider for CachedProvider<P> {
    async fn fetch_publication(&self, doi: &Doi) -> Result<PublicationRecord, GatewayError> {
        if let Some(hit) = self.publications.get(doi, self.ttl) {
            return Ok(hit);
        }
        self.upstream_calls.fetch_add(1, Ordering::Relaxed);
        let record = self.inner.fetch_publication(doi).await?;
        if !self.ttl.is_zero() {
            self.publications.put(doi.clone(), record.clone());
        }
        Ok(record)
    }

    async fn fetch_author_citations(
        &self,
        author: &AuthorRef,
    ) -> Result<CitationProfile, GatewayError> {
        if let Some(hit) = self.authors.get(author, self.ttl) {
            return Ok(hit);
        }
        self.upstream_calls.fetch_add(1, Ordering::Relaxed);
        let profile = self.inner.fetch_author_citations(author).await?;
        if !self.ttl.is_zero() {
            self.authors.put(author.clone(), profile.clone());
        }
        Ok(profile)
    }

    fn describe(&self) -> String {
        self.inner.describe()
    }
}
