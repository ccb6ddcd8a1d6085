use proptest::prelude::*;
use sei_gateway::{classify_method_from_metadata, Doi, PublicationRecord, METHOD_RULES};

const TAGS: &[&str] = &[
    "Journal Article",
    "Meta-Analysis",
    "Randomized Controlled Trial",
    "Cohort Studies",
    "Case-Control Studies",
    "Cross-Sectional Studies",
    "Case Reports",
    "Editorial",
    "Comment",
    "Review",
    "Multicenter Study",
];

fn record(types: Vec<String>, title: String) -> PublicationRecord {
    PublicationRecord {
        doi: Doi::parse("10.1000/p").unwrap(),
        title,
        channel_name: String::new(),
        issns: vec![],
        publication_types: types,
        authors: vec![],
        abstract_text: None,
        is_peer_reviewed_flag: None,
    }
}

/// Smallest rank of any rule with a keyword inside any tag.
fn oracle_rank(types: &[String]) -> Option<u8> {
    METHOD_RULES
        .iter()
        .filter(|r| {
            r.keywords
                .iter()
                .any(|k| types.iter().any(|t| t.to_lowercase().contains(k)))
        })
        .map(|r| r.rank)
        .min()
}

proptest! {
    #[test]
    fn permuting_types_never_changes_result(
        types in prop::sample::subsequence(TAGS, 0..=TAGS.len()).prop_shuffle(),
        title in "[a-z ]{0,20}",
    ) {
        let types: Vec<String> = types.iter().map(|s| s.to_string()).collect();
        let mut reversed = types.clone();
        reversed.reverse();
        let a = classify_method_from_metadata(&record(types.clone(), title.clone()));
        let b = classify_method_from_metadata(&record(reversed, title));
        if oracle_rank(&types).is_some() {
            prop_assert_eq!(&a, &b);
        }
        prop_assert_eq!(a.as_ref().map(|m| m.rank.rank()), b.as_ref().map(|m| m.rank.rank()));
    }

    #[test]
    fn types_rank_is_strongest_matching_rule(
        types in prop::sample::subsequence(TAGS, 0..=TAGS.len()),
    ) {
        let types: Vec<String> = types.iter().map(|s| s.to_string()).collect();
        let got = classify_method_from_metadata(&record(types.clone(), String::new()));
        prop_assert_eq!(got.map(|m| m.rank.rank()), oracle_rank(&types));
    }
}
