use sei_core::MethodRank;
use serde::{Deserialize, Serialize};

use crate::record::PublicationRecord;

/// Keywords that place a study at one rank of the evidence hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodRule {
    pub rank: u8,
    pub keywords: &'static [&'static str],
}

/// Ordered, first match wins. Keywords are matched case-insensitively as substrings.
pub const METHOD_RULES: &[MethodRule] = &[
    MethodRule {
        rank: 1,
        keywords: &["meta-analysis", "systematic review"],
    },
    MethodRule {
        rank: 2,
        keywords: &["randomized controlled trial", "randomised"],
    },
    MethodRule {
        rank: 3,
        keywords: &["cohort"],
    },
    MethodRule {
        rank: 4,
        keywords: &["case-control"],
    },
    MethodRule {
        rank: 5,
        keywords: &["cross-sectional"],
    },
    MethodRule {
        rank: 6,
        keywords: &["case report", "case series"],
    },
    MethodRule {
        rank: 7,
        keywords: &["in vitro", "animal", "editorial", "comment", "expert opinion"],
    },
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchedField {
    PublicationType,
    Title,
    /// Free method text entered by a person.
    Text,
}

/// A classification with the rule that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodMatch {
    pub rank: MethodRank,
    pub rule_index: usize,
    pub keyword: String,
    pub field: MatchedField,
    pub matched_text: String,
}

fn first_match<'a>(
    candidates: impl Iterator<Item = &'a str> + Clone,
    field: MatchedField,
) -> Option<MethodMatch> {
    METHOD_RULES.iter().enumerate().find_map(|(rule_index, rule)| {
        rule.keywords.iter().find_map(|kw| {
            candidates
                .clone()
                .find(|c| c.to_lowercase().contains(kw))
                .map(|c| MethodMatch {
                    rank: MethodRank::new(rule.rank.into()).expect("rule ranks are 1..=7"),
                    rule_index,
                    keyword: (*kw).to_owned(),
                    field,
                    matched_text: c.to_owned(),
                })
        })
    })
}

/// Infers the study design from publication types, falling back to the
/// title. `None` means the method needs manual entry.
pub fn classify_method_from_metadata(record: &PublicationRecord) -> Option<MethodMatch> {
    first_match(
        record.publication_types.iter().map(String::as_str),
        MatchedField::PublicationType,
    )
    .or_else(|| first_match(std::iter::once(record.title.as_str()), MatchedField::Title))
}

/// Applies the same rule list to a free-text method description.
pub fn classify_method_text(text: &str) -> Option<MethodMatch> {
    first_match(std::iter::once(text), MatchedField::Text)
}
