use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use uuid::Uuid;

use crate::bfi::BfiLevel;
use crate::error::{CoreError, ErrorCode, ValidationErrors, ValidationIssue};
use crate::evidence::{aggregate_evidence, EvidenceLevel};
use crate::experience::{classify_experience, ExperienceLevel};
use crate::hindex::{h_index, CitationProfile};
use crate::method::MethodRank;
use crate::remark::{Severity, SpecialRemark};

/// Opaque identifier of an assessed source, rendered as a UUID.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AssessmentId(Uuid);

impl AssessmentId {
    pub fn new_random() -> Self {
        AssessmentId(Uuid::new_v4())
    }

    pub fn from_uuid(u: Uuid) -> Self {
        AssessmentId(u)
    }

    pub fn as_uuid(&self) -> &Uuid {
        &self.0
    }
}

impl fmt::Display for AssessmentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.hyphenated())
    }
}

impl FromStr for AssessmentId {
    type Err = uuid::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Uuid::parse_str(s).map(AssessmentId)
    }
}

/// Who filled in the variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryMode {
    #[default]
    Manual,
    Automated,
}

/// Where the variables came from. Display-only; never used for scoring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel_issn: Option<String>,
}

impl Provenance {
    pub fn is_empty(&self) -> bool {
        self.doi.is_none() && self.channel_name.is_none() && self.channel_issn.is_none()
    }
}

/// Raw author data as entered, before validation.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DraftProfile {
    #[serde(default)]
    pub author_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citations: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precomputed_h: Option<i64>,
}

impl From<&CitationProfile> for DraftProfile {
    fn from(p: &CitationProfile) -> Self {
        DraftProfile {
            author_name: p.author_name().to_owned(),
            citations: p
                .citations()
                .map(|c| c.iter().map(|&v| i64::try_from(v).unwrap_or(i64::MAX)).collect()),
            precomputed_h: p.precomputed_h().map(i64::from),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DraftRemark {
    pub text: String,
    #[serde(default)]
    pub severity: Severity,
}

impl DraftRemark {
    pub fn info(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            severity: Severity::Info,
        }
    }
}

impl From<&SpecialRemark> for DraftRemark {
    fn from(r: &SpecialRemark) -> Self {
        DraftRemark {
            text: r.text().to_owned(),
            severity: r.severity(),
        }
    }
}

/// The variables of an assessment as entered, without derived fields.
///
/// Team experience is given either as author profiles, as a bare
/// `team_max_h`, or both (in which case they must agree).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AssessmentDraft {
    #[serde(default)]
    pub bfi: Option<i64>,
    /// Defaults to `bfi > 0` when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bfi_channel_found: Option<bool>,
    #[serde(default)]
    pub method_rank: Option<i64>,
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

/// A validated assessment. Derived fields are computed at construction and
/// re-checked on deserialization, so a value of this type is always coherent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AssessmentRepr")]
pub struct Assessment {
    bfi: BfiLevel,
    bfi_channel_found: bool,
    method: MethodRank,
    team_max_h: u32,
    experience: ExperienceLevel,
    remarks: Vec<SpecialRemark>,
    evidence: EvidenceLevel,
    entered_by: EntryMode,
    #[serde(skip_serializing_if = "Provenance::is_empty")]
    provenance: Provenance,
}

#[derive(Deserialize)]
struct AssessmentRepr {
    bfi: BfiLevel,
    bfi_channel_found: bool,
    method: MethodRank,
    team_max_h: u32,
    experience: ExperienceLevel,
    remarks: Vec<SpecialRemark>,
    evidence: EvidenceLevel,
    entered_by: EntryMode,
    #[serde(default)]
    provenance: Provenance,
}

impl TryFrom<AssessmentRepr> for Assessment {
    type Error = CoreError;

    fn try_from(r: AssessmentRepr) -> Result<Self, Self::Error> {
        let derived = Assessment::derive(
            r.bfi,
            r.bfi_channel_found,
            r.method,
            r.team_max_h,
            r.remarks,
            r.entered_by,
            r.provenance,
        )?;
        if derived.evidence != r.evidence {
            return Err(CoreError::IncoherentAssessment(format!(
                "evidence is {} but the variables give {}",
                r.evidence, derived.evidence
            )));
        }
        if derived.experience != r.experience {
            return Err(CoreError::IncoherentAssessment(format!(
                "experience is {} but h-index {} gives {}",
                r.experience, r.team_max_h, derived.experience
            )));
        }
        Ok(derived)
    }
}

impl Assessment {
    /// Builds an assessment from typed variables, deriving experience and
    /// evidence. Fails only when a BFI-0 source carries no remark.
    pub fn derive(
        bfi: BfiLevel,
        bfi_channel_found: bool,
        method: MethodRank,
        team_max_h: u32,
        remarks: Vec<SpecialRemark>,
        entered_by: EntryMode,
        provenance: Provenance,
    ) -> Result<Self, CoreError> {
        if bfi.is_unreviewed() && remarks.is_empty() {
            return Err(CoreError::IncoherentAssessment(
                "a BFI level 0 source needs at least one remark".into(),
            ));
        }
        Ok(Self {
            bfi,
            bfi_channel_found,
            method,
            team_max_h,
            experience: classify_experience(team_max_h),
            remarks,
            evidence: aggregate_evidence(bfi, method, team_max_h),
            entered_by,
            provenance,
        })
    }

    pub fn bfi(&self) -> BfiLevel {
        self.bfi
    }

    pub fn bfi_channel_found(&self) -> bool {
        self.bfi_channel_found
    }

    pub fn method(&self) -> MethodRank {
        self.method
    }

    pub fn team_max_h(&self) -> u32 {
        self.team_max_h
    }

    pub fn experience(&self) -> ExperienceLevel {
        self.experience
    }

    pub fn remarks(&self) -> &[SpecialRemark] {
        &self.remarks
    }

    pub fn evidence(&self) -> EvidenceLevel {
        self.evidence
    }

    pub fn entered_by(&self) -> EntryMode {
        self.entered_by
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Back to the entered-variables form, e.g. for re-assessment.
    pub fn to_draft(&self) -> AssessmentDraft {
        AssessmentDraft {
            bfi: Some(self.bfi.value().into()),
            bfi_channel_found: Some(self.bfi_channel_found),
            method_rank: Some(self.method.rank().into()),
            team_max_h: Some(self.team_max_h.into()),
            authors: None,
            remarks: self.remarks.iter().map(DraftRemark::from).collect(),
            entered_by: self.entered_by,
            provenance: self.provenance.clone(),
        }
    }
}

/// A stored, versioned assessment of one source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceAssessment {
    pub id: AssessmentId,
    pub version: u32,
    pub created_at: DateTime<Utc>,
    #[serde(flatten)]
    pub assessment: Assessment,
}

/// Checks every rule on a draft and derives the computed fields.
///
/// All violated rules are reported, not just the first.
pub fn validate_assessment(draft: &AssessmentDraft) -> Result<Assessment, ValidationErrors> {
    let mut errors = ValidationErrors::default();

    let bfi = match draft.bfi.map(BfiLevel::new) {
        Some(Ok(b)) => Some(b),
        Some(Err(e)) => {
            errors.push(ValidationIssue::new(ErrorCode::InvalidBfiLevel, "bfi", e.to_string()));
            None
        }
        None => {
            errors.push(ValidationIssue::new(
                ErrorCode::MissingBfiLevel,
                "bfi",
                "the BFI level of the publication channel is required",
            ));
            None
        }
    };

    let method = match draft.method_rank.map(MethodRank::new) {
        Some(Ok(m)) => Some(m),
        Some(Err(e)) => {
            errors.push(ValidationIssue::new(
                ErrorCode::InvalidMethodRank,
                "method_rank",
                e.to_string(),
            ));
            None
        }
        None => {
            errors.push(ValidationIssue::new(
                ErrorCode::MissingMethodRank,
                "method_rank",
                "the evidence-hierarchy rank of the method is required",
            ));
            None
        }
    };

    let team_max_h = validate_team(draft, &mut errors);

    let mut remarks = Vec::with_capacity(draft.remarks.len());
    for (i, r) in draft.remarks.iter().enumerate() {
        match SpecialRemark::new(r.text.clone(), r.severity) {
            Ok(remark) => remarks.push(remark),
            Err(e) => errors.push(ValidationIssue::new(
                ErrorCode::EmptyRemarkText,
                format!("remarks[{i}].text"),
                e.to_string(),
            )),
        }
    }

    if bfi.is_some_and(BfiLevel::is_unreviewed) && remarks.is_empty() {
        errors.push(ValidationIssue::new(
            ErrorCode::MissingRemarkForUnreviewed,
            "remarks",
            "a source that is not peer reviewed per the BFI standard needs an explanatory remark",
        ));
    }

    match (bfi, method, team_max_h) {
        (Some(bfi), Some(method), Some(h)) if errors.is_empty() => {
            let found = draft.bfi_channel_found.unwrap_or(!bfi.is_unreviewed());
            Assessment::derive(
                bfi,
                found,
                method,
                h,
                remarks,
                draft.entered_by,
                draft.provenance.clone(),
            )
            .map_err(|e| {
                ValidationErrors(vec![ValidationIssue::new(
                    ErrorCode::MissingRemarkForUnreviewed,
                    "remarks",
                    e.to_string(),
                )])
            })
        }
        _ => Err(errors),
    }
}

fn validate_team(draft: &AssessmentDraft, errors: &mut ValidationErrors) -> Option<u32> {
    let stated = match draft.team_max_h {
        Some(h) if h < 0 => {
            errors.push(ValidationIssue::new(
                ErrorCode::NegativeHIndex,
                "team_max_h",
                format!("h-index {h} is negative"),
            ));
            return None;
        }
        Some(h) => Some(u32::try_from(h).unwrap_or(u32::MAX)),
        None => None,
    };

    let Some(authors) = &draft.authors else {
        if stated.is_none() {
            errors.push(ValidationIssue::new(
                ErrorCode::MissingTeamEvidence,
                "authors",
                "give author profiles or team_max_h",
            ));
        }
        return stated;
    };

    if authors.is_empty() {
        errors.push(ValidationIssue::new(
            ErrorCode::EmptyAuthorList,
            "authors",
            "author list is empty",
        ));
        return None;
    }

    let before = errors.0.len();
    let mut best = 0u32;
    for (i, a) in authors.iter().enumerate() {
        if let Some(h) = profile_h(i, a, errors) {
            best = best.max(h);
        }
    }
    if errors.0.len() > before {
        return None;
    }

    if let Some(stated) = stated {
        if stated != best {
            errors.push(ValidationIssue::new(
                ErrorCode::TeamMaxHMismatch,
                "team_max_h",
                format!("team_max_h is {stated} but the author profiles give {best}"),
            ));
            return None;
        }
    }
    Some(best)
}

fn profile_h(i: usize, a: &DraftProfile, errors: &mut ValidationErrors) -> Option<u32> {
    let mut ok = true;
    let counts = a.citations.as_ref().map(|cs| {
        cs.iter()
            .enumerate()
            .filter_map(|(j, &c)| match u64::try_from(c) {
                Ok(c) => Some(c),
                Err(_) => {
                    ok = false;
                    errors.push(ValidationIssue::new(
                        ErrorCode::NegativeCitationCount,
                        format!("authors[{i}].citations[{j}]"),
                        format!("citation count {c} is negative"),
                    ));
                    None
                }
            })
            .collect::<Vec<u64>>()
    });
    let stated = match a.precomputed_h {
        Some(h) if h < 0 => {
            errors.push(ValidationIssue::new(
                ErrorCode::NegativeHIndex,
                format!("authors[{i}].precomputed_h"),
                format!("h-index {h} is negative"),
            ));
            return None;
        }
        Some(h) => Some(u32::try_from(h).unwrap_or(u32::MAX)),
        None => None,
    };
    if !ok {
        return None;
    }
    match (counts, stated) {
        (None, None) => {
            errors.push(ValidationIssue::new(
                ErrorCode::ProfileWithoutData,
                format!("authors[{i}]"),
                format!(
                    "author `{}` has neither citation counts nor an h-index",
                    a.author_name
                ),
            ));
            None
        }
        (Some(counts), Some(stated)) => {
            let computed = h_index(&counts);
            if computed == stated {
                Some(stated)
            } else {
                errors.push(ValidationIssue::new(
                    ErrorCode::PrecomputedHMismatch,
                    format!("authors[{i}].precomputed_h"),
                    format!("stated h-index {stated} but citations give {computed}"),
                ));
                None
            }
        }
        (Some(counts), None) => Some(h_index(&counts)),
        (None, Some(stated)) => Some(stated),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draft(bfi: i64, rank: i64, h: i64, remarks: &[&str]) -> AssessmentDraft {
        AssessmentDraft {
            bfi: Some(bfi),
            method_rank: Some(rank),
            team_max_h: Some(h),
            remarks: remarks.iter().map(|t| DraftRemark::info(*t)).collect(),
            ..Default::default()
        }
    }

    #[test]
    fn unreviewed_without_remark_is_rejected() {
        let err = validate_assessment(&draft(0, 1, 10, &[])).unwrap_err();
        assert_eq!(err.codes(), vec![ErrorCode::MissingRemarkForUnreviewed]);
    }

    #[test]
    fn unreviewed_with_remark_is_low() {
        let a = validate_assessment(&draft(0, 1, 10, &["preprint, not yet peer reviewed"])).unwrap();
        assert_eq!(a.evidence(), EvidenceLevel::Low);
        assert!(!a.bfi_channel_found());
    }

    #[test]
    fn high_without_remarks() {
        let a = validate_assessment(&draft(2, 1, 25, &[])).unwrap();
        assert_eq!(a.evidence(), EvidenceLevel::High);
        assert_eq!(a.experience(), ExperienceLevel::Experienced);
        assert!(a.bfi_channel_found());
    }

    #[test]
    fn reports_every_violation() {
        let d = AssessmentDraft {
            bfi: Some(0),
            method_rank: Some(9),
            authors: Some(vec![
                DraftProfile {
                    author_name: "a".into(),
                    citations: Some(vec![3, -2]),
                    precomputed_h: None,
                },
                DraftProfile {
                    author_name: "b".into(),
                    ..Default::default()
                },
            ]),
            remarks: vec![DraftRemark::info("   ")],
            ..Default::default()
        };
        let err = validate_assessment(&d).unwrap_err();
        assert_eq!(
            err.codes(),
            vec![
                ErrorCode::InvalidMethodRank,
                ErrorCode::NegativeCitationCount,
                ErrorCode::ProfileWithoutData,
                ErrorCode::EmptyRemarkText,
                ErrorCode::MissingRemarkForUnreviewed,
            ]
        );
        assert_eq!(err.0[1].field, "authors[0].citations[1]");
    }

    #[test]
    fn team_evidence_rules() {
        let mut d = draft(2, 1, 0, &[]);
        d.team_max_h = None;
        assert_eq!(
            validate_assessment(&d).unwrap_err().codes(),
            vec![ErrorCode::MissingTeamEvidence]
        );
        d.authors = Some(vec![]);
        assert_eq!(
            validate_assessment(&d).unwrap_err().codes(),
            vec![ErrorCode::EmptyAuthorList]
        );
        d.authors = Some(vec![
            DraftProfile {
                author_name: "a".into(),
                citations: Some(vec![10, 8, 5, 4, 3]),
                precomputed_h: None,
            },
            DraftProfile {
                author_name: "b".into(),
                citations: None,
                precomputed_h: Some(3),
            },
        ]);
        assert_eq!(validate_assessment(&d).unwrap().team_max_h(), 4);
        d.team_max_h = Some(5);
        assert_eq!(
            validate_assessment(&d).unwrap_err().codes(),
            vec![ErrorCode::TeamMaxHMismatch]
        );
        d.team_max_h = Some(-1);
        assert_eq!(
            validate_assessment(&d).unwrap_err().codes(),
            vec![ErrorCode::NegativeHIndex]
        );
    }

    #[test]
    fn precomputed_mismatch_in_draft() {
        let mut d = draft(1, 3, 0, &[]);
        d.team_max_h = None;
        d.authors = Some(vec![DraftProfile {
            author_name: "a".into(),
            citations: Some(vec![1, 1, 1]),
            precomputed_h: Some(2),
        }]);
        assert_eq!(
            validate_assessment(&d).unwrap_err().codes(),
            vec![ErrorCode::PrecomputedHMismatch]
        );
    }

    #[test]
    fn source_assessment_round_trips_and_rejects_tampering() {
        let a = validate_assessment(&draft(3, 2, 61, &["industry funded"])).unwrap();
        let sa = SourceAssessment {
            id: AssessmentId::new_random(),
            version: 1,
            created_at: Utc::now(),
            assessment: a,
        };
        let json = serde_json::to_string(&sa).unwrap();
        let back: SourceAssessment = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sa);

        let tampered = json.replace("\"evidence\":\"high\"", "\"evidence\":\"low\"");
        assert_ne!(tampered, json);
        assert!(serde_json::from_str::<SourceAssessment>(&tampered).is_err());
        let tampered = json.replace("\"experience\":\"excellent\"", "\"experience\":\"experienced\"");
        assert!(serde_json::from_str::<SourceAssessment>(&tampered).is_err());
    }

    #[test]
    fn to_draft_revalidates_to_same_assessment() {
        let a = validate_assessment(&draft(0, 6, 44, &["small sample"])).unwrap();
        assert_eq!(validate_assessment(&a.to_draft()).unwrap(), a);
    }

    #[test]
    fn missing_variables() {
        let err = validate_assessment(&AssessmentDraft {
            team_max_h: Some(3),
            ..Default::default()
        })
        .unwrap_err();
        assert_eq!(
            err.codes(),
            vec![ErrorCode::MissingBfiLevel, ErrorCode::MissingMethodRank]
        );
    }

    #[test]
    fn draft_defaults_from_json() {
        let d: AssessmentDraft =
            serde_json::from_str(r#"{"bfi":2,"method_rank":1,"team_max_h":25}"#).unwrap();
        assert_eq!(d.entered_by, EntryMode::Manual);
        assert!(d.remarks.is_empty());
        assert_eq!(validate_assessment(&d).unwrap().evidence(), EvidenceLevel::High);
    }
}
