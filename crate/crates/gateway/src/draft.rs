use futures::future::join_all;
use sei_core::{
    classify_experience, validate_assessment, AssessmentDraft, BfiLevel, DraftProfile,
    DraftRemark, EntryMode, EvidenceLevel, ExperienceLevel, Provenance, Severity,
    ValidationIssue,
};
use sei_registry::{lookup_channel, ChannelQuery, Issn, Registry};
use serde::{Deserialize, Serialize};

use crate::classify::{classify_method_from_metadata, MethodMatch};
use crate::error::GatewayError;
use crate::provider::MetadataProvider;
use crate::record::{AuthorCandidate, AuthorRef, Doi, PublicationRecord};

/// Warning attached to every automated draft whose channel scores BFI 0.
/// The journalist may edit it before committing.
pub const AUTO_UNREVIEWED_REMARK: &str = "not peer reviewed per BFI standard";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReviewField {
    Method,
    Authors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchedBy {
    Issn,
    Name,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelResolution {
    pub channel_name: String,
    pub bfi: BfiLevel,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched_by: Option<MatchedBy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched_name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched_issn: Option<String>,
    /// ISSNs in the record that failed validation and were not looked up.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ignored_issns: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AuthorStatus {
    Resolved { h_index: u32 },
    Ambiguous { candidates: Vec<AuthorCandidate> },
    NotFound,
    Failed { message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorResolution {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provider_author_id: Option<String>,
    #[serde(flatten)]
    pub status: AuthorStatus,
}

/// Values derived from whatever could be resolved.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DraftDerived {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub team_max_h: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experience: Option<ExperienceLevel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<EvidenceLevel>,
}

/// An automated draft plus everything the journalist needs to finish it.
/// Nothing here is persisted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DraftOutcome {
    pub draft: AssessmentDraft,
    pub derived: DraftDerived,
    pub channel: ChannelResolution,
    pub method: Option<MethodMatch>,
    pub authors: Vec<AuthorResolution>,
    pub needs_review: Vec<ReviewField>,
    /// Rules the draft violates as it stands.
    pub validation: Vec<ValidationIssue>,
}

fn resolve_channel(registry: &Registry, record: &PublicationRecord) -> ChannelResolution {
    let mut ignored = Vec::new();
    for raw in &record.issns {
        let Ok(issn) = Issn::parse(raw) else {
            ignored.push(raw.clone());
            continue;
        };
        if let Some(rec) = registry.by_issn(&issn) {
            return ChannelResolution {
                channel_name: record.channel_name.clone(),
                bfi: rec.bfi_level,
                found: true,
                matched_by: Some(MatchedBy::Issn),
                matched_name: Some(rec.canonical_name.clone()),
                matched_issn: Some(issn.to_string()),
                ignored_issns: ignored,
            };
        }
    }
    let by_name = lookup_channel(registry, &ChannelQuery::Name(record.channel_name.clone()))
        .expect("name lookups cannot fail");
    ChannelResolution {
        channel_name: record.channel_name.clone(),
        bfi: by_name.bfi,
        found: by_name.found,
        matched_by: by_name.found.then_some(MatchedBy::Name),
        matched_name: by_name.matched.map(|r| r.canonical_name),
        matched_issn: None,
        ignored_issns: ignored,
    }
}

/// Fetches a publication and its authors and assembles an automated draft.
///
/// Only a failure to fetch the publication itself is an error. Author
/// lookups that fail or are ambiguous, and methods the rule list cannot
/// classify, are reported through `needs_review`.
pub async fn draft_assessment_from_doi<P: MetadataProvider + ?Sized>(
    provider: &P,
    registry: &Registry,
    doi: &str,
) -> Result<DraftOutcome, GatewayError> {
    let doi = Doi::parse(doi)?;
    let record = provider.fetch_publication(&doi).await?;

    let channel = resolve_channel(registry, &record);
    let method = classify_method_from_metadata(&record);

    let lookups = record.authors.iter().map(|a| {
        let author = AuthorRef::from(a);
        async move {
            let result = provider.fetch_author_citations(&author).await;
            (author, result)
        }
    });
    let mut profiles = Vec::new();
    let mut authors = Vec::new();
    for (author, result) in join_all(lookups).await {
        let status = match result.and_then(|p| {
            p.h_index()
                .map(|h| (p, h))
                .map_err(|e| GatewayError::MalformedPayload(e.to_string()))
        }) {
            Ok((profile, h_index)) => {
                profiles.push(DraftProfile::from(&profile));
                AuthorStatus::Resolved { h_index }
            }
            Err(GatewayError::AmbiguousAuthor { candidates, .. }) => {
                AuthorStatus::Ambiguous { candidates }
            }
            Err(GatewayError::NotFound(_)) => AuthorStatus::NotFound,
            Err(e) => AuthorStatus::Failed {
                message: e.to_string(),
            },
        };
        authors.push(AuthorResolution {
            name: author.name,
            provider_author_id: author.provider_author_id,
            status,
        });
    }

    let mut needs_review = Vec::new();
    if method.is_none() {
        needs_review.push(ReviewField::Method);
    }
    let all_resolved = authors
        .iter()
        .all(|a| matches!(a.status, AuthorStatus::Resolved { .. }));
    if authors.is_empty() || !all_resolved {
        needs_review.push(ReviewField::Authors);
    }

    let remarks = if channel.bfi.is_unreviewed() {
        vec![DraftRemark {
            text: AUTO_UNREVIEWED_REMARK.to_owned(),
            severity: Severity::Warning,
        }]
    } else {
        Vec::new()
    };

    let draft = AssessmentDraft {
        bfi: Some(channel.bfi.value().into()),
        bfi_channel_found: Some(channel.found),
        method_rank: method.as_ref().map(|m| m.rank.rank().into()),
        team_max_h: None,
        authors: Some(profiles),
        remarks,
        entered_by: EntryMode::Automated,
        provenance: Provenance {
            doi: Some(doi.to_string()),
            channel_name: Some(
                channel
                    .matched_name
                    .clone()
                    .unwrap_or_else(|| record.channel_name.clone()),
            ),
            channel_issn: channel.matched_issn.clone(),
        },
    };

    let (derived, validation) = match validate_assessment(&draft) {
        Ok(a) => (
            DraftDerived {
                team_max_h: Some(a.team_max_h()),
                experience: Some(a.experience()),
                evidence: Some(a.evidence()),
            },
            Vec::new(),
        ),
        Err(errors) => {
            let team_max_h = authors
                .iter()
                .filter_map(|a| match a.status {
                    AuthorStatus::Resolved { h_index } => Some(h_index),
                    _ => None,
                })
                .max();
            (
                DraftDerived {
                    team_max_h,
                    experience: team_max_h.map(classify_experience),
                    evidence: channel.bfi.is_unreviewed().then_some(EvidenceLevel::Low),
                },
                errors.0,
            )
        }
    };

    Ok(DraftOutcome {
        draft,
        derived,
        channel,
        method,
        authors,
        needs_review,
        validation,
    })
}
