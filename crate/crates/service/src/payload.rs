//! Indicator payloads for the reader widget: a compact badge and the
//! expanded card. Both carry semantic values and copy only; presentation
//! is left to the client.

use sei_core::{Assessment, EvidenceLevel, ExperienceLevel, Severity};
use sei_store::{StoredAssessment, VersionRef};
use serde::{Deserialize, Serialize};

use crate::copy::StringTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableKey {
    Publication,
    Method,
    Experience,
    Remarks,
}

impl VariableKey {
    /// Display order of the four variables.
    pub const ORDER: [VariableKey; 4] = [
        VariableKey::Publication,
        VariableKey::Method,
        VariableKey::Experience,
        VariableKey::Remarks,
    ];

    fn as_str(self) -> &'static str {
        match self {
            VariableKey::Publication => "publication",
            VariableKey::Method => "method",
            VariableKey::Experience => "experience",
            VariableKey::Remarks => "remarks",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableSummary {
    pub key: VariableKey,
    pub label: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactPayload {
    pub evidence: EvidenceLevel,
    pub evidence_label: String,
    pub variable_summaries: Vec<VariableSummary>,
    pub assessment_ref: VersionRef,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableExplanation {
    pub key: VariableKey,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemarkView {
    pub text: String,
    pub severity: Severity,
}

/// A slot for a link to further reading. `url` is empty until configured.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkSlot {
    pub key: String,
    pub label: String,
    pub url: Option<String>,
}

/// Raw variable values behind the summaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableValues {
    pub bfi_level: u8,
    pub method_rank: u8,
    pub team_max_h: u32,
    pub experience: ExperienceLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandedPayload {
    #[serde(flatten)]
    pub compact: CompactPayload,
    pub evidence_explanation: String,
    pub values: VariableValues,
    pub explanations: Vec<VariableExplanation>,
    pub remarks: Vec<RemarkView>,
    pub bfi_channel_found: bool,
    pub links: Vec<LinkSlot>,
    /// Present on Medium and High.
    pub disclaimer: Option<String>,
}

fn experience_key(level: ExperienceLevel) -> &'static str {
    match level {
        ExperienceLevel::LessExperienced => "less_experienced",
        ExperienceLevel::Experienced => "experienced",
        ExperienceLevel::VeryExperienced => "very_experienced",
        ExperienceLevel::Excellent => "excellent",
    }
}

fn summary_value(a: &Assessment, key: VariableKey, t: &StringTable) -> String {
    match key {
        VariableKey::Publication if a.bfi().value() > 0 => {
            t.format("value.publication.level", &[("level", &a.bfi().value())])
        }
        VariableKey::Publication if a.bfi_channel_found() => {
            t.get("value.publication.below_minimum").to_owned()
        }
        VariableKey::Publication => t.get("value.publication.unlisted").to_owned(),
        VariableKey::Method => {
            let rank = a.method().rank();
            t.format(
                "value.method",
                &[("label", &t.get(&format!("method.{rank}"))), ("rank", &rank)],
            )
        }
        VariableKey::Experience => t.format(
            "value.experience",
            &[
                ("label", &t.get(&format!("experience.{}", experience_key(a.experience())))),
                ("h", &a.team_max_h()),
            ],
        ),
        VariableKey::Remarks => match a.remarks() {
            [] => t.get("value.remarks.none").to_owned(),
            [one] => one.text().to_owned(),
            many => t.format("value.remarks.count", &[("count", &many.len())]),
        },
    }
}

pub fn render_compact(stored: &StoredAssessment, t: &StringTable) -> CompactPayload {
    let a = &stored.assessment.assessment;
    CompactPayload {
        evidence: a.evidence(),
        evidence_label: t.get(&format!("evidence.{}", a.evidence().as_str())).to_owned(),
        variable_summaries: VariableKey::ORDER
            .iter()
            .map(|&key| VariableSummary {
                key,
                label: t.get(&format!("label.{}", key.as_str())).to_owned(),
                value: summary_value(a, key, t),
            })
            .collect(),
        assessment_ref: stored.version_ref(),
    }
}

pub fn render_expanded(
    stored: &StoredAssessment,
    t: &StringTable,
    links: &[(String, Option<String>)],
) -> ExpandedPayload {
    let a = &stored.assessment.assessment;
    let evidence = a.evidence();
    ExpandedPayload {
        compact: render_compact(stored, t),
        evidence_explanation: t.get(&format!("evidence.explain.{}", evidence.as_str())).to_owned(),
        values: VariableValues {
            bfi_level: a.bfi().value(),
            method_rank: a.method().rank(),
            team_max_h: a.team_max_h(),
            experience: a.experience(),
        },
        explanations: VariableKey::ORDER
            .iter()
            .map(|&key| VariableExplanation {
                key,
                text: t.get(&format!("explain.{}", key.as_str())).to_owned(),
            })
            .collect(),
        remarks: a
            .remarks()
            .iter()
            .map(|r| RemarkView {
                text: r.text().to_owned(),
                severity: r.severity(),
            })
            .collect(),
        bfi_channel_found: a.bfi_channel_found(),
        links: links
            .iter()
            .map(|(key, url)| LinkSlot {
                key: key.clone(),
                label: t.get(&format!("link.{key}")).to_owned(),
                url: url.clone(),
            })
            .collect(),
        disclaimer: (evidence != EvidenceLevel::Low).then(|| t.get("disclaimer").to_owned()),
    }
}
