//! Domain types and scoring rules for the Science Evidence Indicator (SEI).
//!
//! A scientific source is described by four variables: the BFI level of its
//! publication channel, the rank of its study design in a 7-level evidence
//! hierarchy, the experience of its author team (the largest h-index among
//! the authors) and free-text special remarks. The first three aggregate into
//! an [`EvidenceLevel`] of Low, Medium or High.
//!
//! Everything in this crate is pure and deterministic.

pub mod assessment;
pub mod bfi;
pub mod canonical;
pub mod error;
pub mod evidence;
pub mod experience;
pub mod hindex;
pub mod method;
pub mod remark;

pub use assessment::{
    validate_assessment, Assessment, AssessmentDraft, AssessmentId, DraftProfile, DraftRemark,
    EntryMode, Provenance, SourceAssessment,
};
pub use bfi::BfiLevel;
pub use canonical::canonical_json;
pub use error::{CoreError, ErrorCode, ValidationErrors, ValidationIssue};
pub use evidence::{aggregate_evidence, EvidenceLevel};
pub use experience::{classify_experience, ExperienceLevel};
pub use hindex::{compute_h_index, h_index, team_max_h, CitationProfile};
pub use method::MethodRank;
pub use remark::{Severity, SpecialRemark};
