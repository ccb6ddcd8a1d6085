use std::time::Duration;

use async_trait::async_trait;
use reqwest::StatusCode;
use sei_core::CitationProfile;
use serde::de::DeserializeOwned;

use crate::error::GatewayError;
use crate::fixture::single_match;
use crate::provider::{MetadataProvider, ProviderConfig};
use crate::record::{encode_component, AuthorDocument, AuthorRef, Doi, PublicationRecord};

/// Talks to an HTTP-JSON metadata service:
///
/// * `GET {base_url}/works/{doi}` returns a publication document,
/// * `GET {base_url}/authors/{id}` returns an author document,
/// * `GET {base_url}/authors?name={name}` returns a list of author documents.
///
/// Path segments are percent-encoded. Transport failures and 5xx/429
/// answers are retried with exponential backoff; 404 is final.
#[derive(Debug, Clone)]
pub struct HttpProvider {
    client: reqwest::Client,
    base_url: String,
    max_retries: u32,
    backoff_base: Duration,
}

impl HttpProvider {
    pub fn new(config: &ProviderConfig) -> Result<Self, GatewayError> {
        let base_url = config
            .base_url
            .as_deref()
            .ok_or_else(|| GatewayError::Config("http provider requires base_url".into()))?
            .trim_end_matches('/')
            .to_owned();
        let client = reqwest::Client::builder()
            .timeout(config.timeout())
            .build()
            .map_err(|e| GatewayError::Config(e.to_string()))?;
        Ok(Self {
            client,
            base_url,
            max_retries: config.max_retries,
            backoff_base: config.backoff_base(),
        })
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    async fn get_json<T: DeserializeOwned>(&self, path: &str, what: &str) -> Result<T, GatewayError> {
        let url = format!("{}{}", self.base_url, path);
        let mut attempt = 0u32;
        loop {
            attempt += 1;
            match self.try_once(&url, what).await {
                Ok(bytes) => {
                    return serde_json::from_slice(&bytes)
                        .map_err(|e| GatewayError::MalformedPayload(format!("{what}: {e}")))
                }
                Err(Attempt::Final(e)) => return Err(e),
                Err(Attempt::Retry(message)) if attempt > self.max_retries => {
                    return Err(GatewayError::Transport {
                        attempts: attempt,
                        message,
                    })
                }
                Err(Attempt::Retry(message)) => {
                    let delay = self.backoff_base * 2u32.saturating_pow(attempt - 1);
                    tracing::debug!(%url, attempt, ?delay, %message, "retrying metadata request");
                    tokio::time::sleep(delay).await;
                }
            }
        }
    }

    async fn try_once(&self, url: &str, what: &str) -> Result<Vec<u8>, Attempt> {
        let resp = self
            .client
            .get(url)
            .header(reqwest::header::ACCEPT, "application/json")
            .send()
            .await
            .map_err(|e| Attempt::Retry(e.to_string()))?;
        let status = resp.status();
        if status == StatusCode::NOT_FOUND {
            return Err(Attempt::Final(GatewayError::NotFound(what.to_owned())));
        }
        if status.is_server_error() || status == StatusCode::TOO_MANY_REQUESTS {
            return Err(Attempt::Retry(format!("status {status}")));
        }
        if !status.is_success() {
            return Err(Attempt::Final(GatewayError::UpstreamStatus(status.as_u16())));
        }
        resp.bytes()
            .await
            .map(|b| b.to_vec())
            .map_err(|e| Attempt::Retry(e.to_string()))
    }
}

enum Attempt {
    Retry(String),
    Final(GatewayError),
}

#[async_trait]
impl MetadataProvider for HttpProvider {
    async fn fetch_publication(&self, doi: &Doi) -> Result<PublicationRecord, GatewayError> {
        let what = format!("publication {doi}");
        let record: PublicationRecord = self
            .get_json(&format!("/works/{}", doi.encoded()), &what)
            .await?;
        if &record.doi != doi {
            return Err(GatewayError::MalformedPayload(format!(
                "requested {doi}, received {}",
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
                self.get_json::<AuthorDocument>(
                    &format!("/authors/{}", encode_component(id)),
                    &format!("author {id}"),
                )
                .await?
            }
            None => {
                let docs: Vec<AuthorDocument> = self
                    .get_json(
                        &format!("/authors?name={}", encode_component(&author.name)),
                        &format!("author named `{}`", author.name),
                    )
                    .await?;
                single_match(&author.name, docs)?
            }
        };
        doc.into_profile()
    }

    fn describe(&self) -> String {
        format!("http:{}", self.base_url)
    }
}
