//! Access to publication metadata for automated assessment drafts.
//!
//! A [`MetadataProvider`] fetches publication records and author citation
//! data, either from a fixture directory or from an HTTP-JSON service with
//! the same document shapes. [`draft_assessment_from_doi`] composes a
//! provider with the BFI registry and the method rule list into a draft the
//! journalist reviews before it is stored.
//!
//! [`intake`] resolves manually entered variables (channel by ISSN or name,
//! method by rank or free text) the same way for the CLI and the service.

pub mod cache;
pub mod classify;
pub mod draft;
pub mod error;
pub mod fixture;
pub mod http;
pub mod intake;
pub mod provider;
pub mod record;
pub mod stub;

pub use cache::CachedProvider;
pub use classify::{
    classify_method_from_metadata, classify_method_text, MatchedField, MethodMatch, MethodRule,
    METHOD_RULES,
};
pub use draft::{
    draft_assessment_from_doi, AuthorResolution, AuthorStatus, ChannelResolution, DraftDerived,
    DraftOutcome, ReviewField, AUTO_UNREVIEWED_REMARK,
};
pub use error::GatewayError;
pub use fixture::FixtureProvider;
pub use http::HttpProvider;
pub use intake::{assess_entry, resolve_entry, ChannelInput, ManualEntry, MethodInput};
pub use provider::{build_provider, MetadataProvider, ProviderConfig, ProviderKind};
pub use record::{AuthorCandidate, AuthorDocument, AuthorEntry, AuthorRef, Doi, PublicationRecord};
