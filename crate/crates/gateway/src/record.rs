use std::fmt;

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use sei_core::CitationProfile;
use serde::{Deserialize, Serialize};

use crate::error::GatewayError;

/// Everything except RFC 3986 unreserved characters.
const COMPONENT: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'.')
    .remove(b'_')
    .remove(b'~');

/// Percent-encodes one path component (a DOI or author id).
pub fn encode_component(raw: &str) -> String {
    utf8_percent_encode(raw, COMPONENT).to_string()
}

/// A DOI of the form `10.<registrant>/<suffix>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Doi(String);

impl Doi {
    /// Accepts bare DOIs as well as `doi:` and `https://doi.org/` forms.
    pub fn parse(raw: &str) -> Result<Self, GatewayError> {
        let s = raw.trim();
        let s = ["https://doi.org/", "http://doi.org/", "https://dx.doi.org/", "doi:"]
            .iter()
            .find_map(|p| s.strip_prefix(p))
            .unwrap_or(s);
        let bad = || GatewayError::InvalidDoi(raw.to_owned());
        let rest = s.strip_prefix("10.").ok_or_else(bad)?;
        let (registrant, suffix) = rest.split_once('/').ok_or_else(bad)?;
        let registrant_ok = !registrant.is_empty()
            && registrant.split('.').all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()));
        if !registrant_ok || suffix.is_empty() || suffix.chars().any(char::is_whitespace) {
            return Err(bad());
        }
        Ok(Doi(s.to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// File stem under `<fixture_root>/publications/` and path segment for
    /// `GET /works/{doi}`.
    pub fn encoded(&self) -> String {
        encode_component(&self.0)
    }
}

impl fmt::Display for Doi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for Doi {
    type Error = GatewayError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        Doi::parse(&s)
    }
}

impl From<Doi> for String {
    fn from(d: Doi) -> String {
        d.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provider_author_id: Option<String>,
}

/// Publication metadata as served by a provider. This is also the JSON
/// document shape of fixture files and of `GET /works/{doi}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub doi: Doi,
    pub title: String,
    pub channel_name: String,
    #[serde(default)]
    pub issns: Vec<String>,
    #[serde(default)]
    pub publication_types: Vec<String>,
    #[serde(default)]
    pub authors: Vec<AuthorEntry>,
    #[serde(default, rename = "abstract", skip_serializing_if = "Option::is_none")]
    pub abstract_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_peer_reviewed_flag: Option<bool>,
}

/// How to find an author at the provider.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AuthorRef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provider_author_id: Option<String>,
    #[serde(default)]
    pub name: String,
}

impl From<&AuthorEntry> for AuthorRef {
    fn from(a: &AuthorEntry) -> Self {
        AuthorRef {
            provider_author_id: a.provider_author_id.clone(),
            name: a.name.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AuthorCandidate {
    pub id: String,
    pub name: String,
}

/// JSON document shape of `<fixture_root>/authors/<id>.json` and of
/// `GET /authors/{id}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorDocument {
    pub id: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citations: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precomputed_h: Option<u32>,
}

impl AuthorDocument {
    pub fn into_profile(self) -> Result<CitationProfile, GatewayError> {
        CitationProfile::new(self.name, self.citations, self.precomputed_h)
            .map_err(|e| GatewayError::MalformedPayload(format!("author {}: {e}", self.id)))
    }

    pub fn candidate(&self) -> AuthorCandidate {
        AuthorCandidate {
            id: self.id.clone(),
            name: self.name.clone(),
        }
    }
}
