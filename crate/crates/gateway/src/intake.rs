//! Manually entered variables, resolved against the registry and the
//! method rule list. The CLI and the HTTP service both go through
//! [`assess_entry`] so they accept and reject exactly the same inputs.

use sei_core::{
    validate_assessment, Assessment, AssessmentDraft, DraftProfile, DraftRemark, EntryMode,
    ErrorCode, Provenance, ValidationErrors, ValidationIssue,
};
use sei_registry::{lookup_channel, ChannelQuery, Registry};
use serde::{Deserialize, Serialize};

use crate::classify::classify_method_text;

/// A channel picked by ISSN, `{"issn": "0140-6736"}`, or by name,
/// `{"name": "The Lancet"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelInput {
    Issn(String),
    Name(String),
}

/// A method given as a rank (`2`) or as text classified by the rule list
/// (`"randomised controlled trial"`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MethodInput {
    Rank(i64),
    Text(String),
}

/// The variables for one source as a journalist enters them. The channel
/// is given either through `channel` (resolved against the registry) or as
/// an explicit `bfi` level, never both.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ManualEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bfi: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bfi_channel_found: Option<bool>,
    #[serde(default, alias = "method_rank", skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub team_max_h: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub authors: Option<Vec<DraftProfile>>,
    #[serde(default)]
    pub remarks: Vec<DraftRemark>,
    #[serde(default)]
    pub entered_by: EntryMode,
    #[serde(default, skip_serializing_if = "Provenance::is_empty")]
    pub provenance: Provenance,
}

/// Resolves channel and method inputs into a core draft. Issues found while
/// resolving are returned alongside; the draft leaves those fields empty.
pub fn resolve_entry(entry: &ManualEntry, registry: &Registry) -> (AssessmentDraft, ValidationErrors) {
    let mut issues = ValidationErrors::default();
    let mut provenance = entry.provenance.clone();

    let (bfi, bfi_channel_found) = match (&entry.channel, entry.bfi) {
        (Some(_), Some(_)) => {
            issues.push(ValidationIssue::new(
                ErrorCode::ConflictingChannelInput,
                "channel",
                "give either a channel or an explicit bfi level, not both",
            ));
            (None, None)
        }
        (Some(channel), None) => {
            let query = match channel {
                ChannelInput::Issn(s) => ChannelQuery::Issn(s.clone()),
                ChannelInput::Name(s) => ChannelQuery::Name(s.clone()),
            };
            match lookup_channel(registry, &query) {
                Ok(hit) => {
                    match (&hit.matched, channel) {
                        (Some(rec), _) => provenance.channel_name = Some(rec.canonical_name.clone()),
                        (None, ChannelInput::Name(n)) => provenance.channel_name = Some(n.clone()),
                        (None, ChannelInput::Issn(_)) => {}
                    }
                    if let ChannelInput::Issn(s) = channel {
                        provenance.channel_issn = Some(s.trim().to_ascii_uppercase());
                    }
                    (Some(i64::from(hit.bfi.value())), Some(hit.found))
                }
                Err(e) => {
                    issues.push(ValidationIssue::new(
                        ErrorCode::MalformedIssn,
                        "channel.issn",
                        e.to_string(),
                    ));
                    (None, None)
                }
            }
        }
        (None, bfi) => (bfi, entry.bfi_channel_found),
    };

    let method_rank = match &entry.method {
        Some(MethodInput::Rank(r)) => Some(*r),
        Some(MethodInput::Text(t)) => {
            if let Ok(r) = t.trim().parse::<i64>() {
                Some(r)
            } else if let Some(m) = classify_method_text(t) {
                Some(i64::from(m.rank.rank()))
            } else {
                issues.push(ValidationIssue::new(
                    ErrorCode::UnclassifiedMethod,
                    "method",
                    format!("no method rule matches `{t}`; give a rank from 1 to 7"),
                ));
                None
            }
        }
        None => None,
    };

    let draft = AssessmentDraft {
        bfi,
        bfi_channel_found,
        method_rank,
        team_max_h: entry.team_max_h,
        authors: entry.authors.clone(),
        remarks: entry.remarks.clone(),
        entered_by: entry.entered_by,
        provenance,
    };
    (draft, issues)
}

/// Resolves and validates one entry, reporting every problem at once.
pub fn assess_entry(entry: &ManualEntry, registry: &Registry) -> Result<Assessment, ValidationErrors> {
    let (draft, mut issues) = resolve_entry(entry, registry);
    let channel_failed = issues.iter().any(|i| i.field.starts_with("channel"));
    let method_failed = issues.contains(ErrorCode::UnclassifiedMethod);
    match validate_assessment(&draft) {
        Ok(a) if issues.is_empty() => Ok(a),
        Ok(_) => Err(issues),
        Err(core) => {
            issues.extend(core.0.into_iter().filter(|i| {
                !(channel_failed && i.code == ErrorCode::MissingBfiLevel
                    || method_failed && i.code == ErrorCode::MissingMethodRank)
            }));
            Err(issues)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sei_core::EvidenceLevel;
    use sei_registry::demo_registry;

    fn entry(json: &str) -> ManualEntry {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn channel_by_issn_and_name() {
        let reg = demo_registry();
        let a = assess_entry(
            &entry(r#"{"channel":{"issn":"0003-4819"},"method":1,"team_max_h":25}"#),
            &reg,
        )
        .unwrap();
        assert_eq!(a.evidence(), EvidenceLevel::High);
        assert_eq!(a.provenance().channel_name.as_deref(), Some("Annals of Internal Medicine"));

        let a = assess_entry(
            &entry(r#"{"channel":{"name":"bmj open"},"method":"cohort study","team_max_h":50}"#),
            &reg,
        )
        .unwrap();
        assert_eq!((a.bfi().value(), a.method().rank()), (1, 3));
        assert_eq!(a.evidence(), EvidenceLevel::Medium);
    }

    #[test]
    fn unknown_channel_without_remark() {
        let reg = demo_registry();
        let err = assess_entry(
            &entry(r#"{"channel":{"name":"Journal of Unlikely Results"},"method":2,"team_max_h":5}"#),
            &reg,
        )
        .unwrap_err();
        assert_eq!(err.codes(), vec![ErrorCode::MissingRemarkForUnreviewed]);
    }

    #[test]
    fn resolution_errors_replace_core_missing_errors() {
        let reg = demo_registry();
        let err = assess_entry(
            &entry(r#"{"channel":{"issn":"1234-5678"},"method":"vibes","team_max_h":5}"#),
            &reg,
        )
        .unwrap_err();
        assert_eq!(err.codes(), vec![ErrorCode::MalformedIssn, ErrorCode::UnclassifiedMethod]);

        let err = assess_entry(&entry(r#"{"channel":{"name":"BMJ"},"bfi":2,"method":1,"team_max_h":5}"#), &reg)
            .unwrap_err();
        assert_eq!(err.codes(), vec![ErrorCode::ConflictingChannelInput]);

        let err = assess_entry(&entry(r#"{"team_max_h":5}"#), &reg).unwrap_err();
        assert_eq!(err.codes(), vec![ErrorCode::MissingBfiLevel, ErrorCode::MissingMethodRank]);
    }

    #[test]
    fn explicit_bfi_and_numeric_text() {
        let reg = demo_registry();
        let a = assess_entry(&entry(r#"{"bfi":3,"method":"2","team_max_h":21}"#), &reg).unwrap();
        assert_eq!(a.evidence(), EvidenceLevel::High);
        assert!(a.bfi_channel_found());
    }

    #[test]
    fn accepts_automated_draft_shape() {
        let reg = demo_registry();
        let json = r#"{"bfi":2,"bfi_channel_found":true,"method_rank":2,
            "authors":[{"author_name":"A","precomputed_h":25}],"remarks":[],
            "entered_by":"automated","provenance":{"doi":"10.1000/demo-rct"}}"#;
        let a = assess_entry(&entry(json), &reg).unwrap();
        assert_eq!(a.entered_by(), EntryMode::Automated);
        assert_eq!(a.evidence(), EvidenceLevel::High);
    }
}
