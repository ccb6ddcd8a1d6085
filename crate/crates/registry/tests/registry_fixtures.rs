use std::collections::BTreeSet;
use std::fmt::Write;

use proptest::prelude::*;
use sei_registry::{
    load_registry, lookup_channel, normalize_channel_name, ChannelQuery, Issn, DEMO_REGISTRY_CSV,
};

/// Builds a valid ISSN from its first seven digits.
fn synth_issn(n: u32) -> String {
    let digits = format!("{:07}", n % 10_000_000);
    let sum: u32 = digits
        .bytes()
        .zip((2..=8).rev())
        .map(|(d, w)| u32::from(d - b'0') * w)
        .sum();
    let check = match (11 - sum % 11) % 11 {
        10 => 'X',
        c => char::from_digit(c, 10).unwrap(),
    };
    format!("{}-{}{}", &digits[..4], &digits[4..], check)
}

fn fixture(issns: &[String]) -> String {
    let mut out = String::from("# generated\nissn,channel_name,bfi_level\n");
    for (i, issn) in issns.iter().enumerate() {
        writeln!(out, "{issn},Synthetic Journal {i},{}", i % 3 + 1).unwrap();
    }
    out
}

#[test]
fn synth_issn_is_valid() {
    assert_eq!(synth_issn(1_234_567), "1234-5679");
    for n in (0..10_000_000).step_by(99_991) {
        assert!(Issn::parse(&synth_issn(n)).is_ok());
    }
}

#[test]
fn thousand_row_fixture_loads() {
    let issns: Vec<String> = (0..1000u32).map(|i| synth_issn(i * 7919 + 13)).collect();
    assert_eq!(issns.iter().collect::<BTreeSet<_>>().len(), 1000);
    let reg = load_registry(fixture(&issns).as_bytes()).unwrap();
    assert_eq!(reg.len(), 1000);
    assert_eq!(reg.issn_count(), 1000);
    for (i, issn) in issns.iter().enumerate() {
        let hit = lookup_channel(&reg, &ChannelQuery::Issn(issn.clone())).unwrap();
        assert!(hit.found);
        assert_eq!(usize::from(hit.bfi.value()), i % 3 + 1);
    }
}

#[test]
fn demo_registry_is_consistent() {
    let reg = load_registry(DEMO_REGISTRY_CSV.as_bytes()).unwrap();
    assert_eq!(reg.len(), 20);
    for rec in reg.records() {
        for issn in &rec.issns {
            assert_eq!(reg.by_issn(issn), Some(rec));
        }
        assert_eq!(reg.by_name(&rec.canonical_name), Some(rec));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lookup_hits_exactly_the_loaded_issns(
        present in prop::collection::btree_set(0u32..10_000_000, 0..60),
        probes in prop::collection::vec(0u32..10_000_000, 0..60),
    ) {
        let issns: Vec<String> = present.iter().map(|&n| synth_issn(n)).collect();
        let reg = load_registry(fixture(&issns).as_bytes()).unwrap();
        for n in probes.iter().chain(present.iter()) {
            let issn = synth_issn(*n);
            let first = lookup_channel(&reg, &ChannelQuery::Issn(issn.clone())).unwrap();
            let again = lookup_channel(&reg, &ChannelQuery::Issn(issn)).unwrap();
            prop_assert_eq!(first.found, present.contains(n));
            prop_assert_eq!(first.bfi.is_unreviewed(), !present.contains(n));
            prop_assert_eq!(&first, &again);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn normalize_is_idempotent(s in any::<String>()) {
        let once = normalize_channel_name(&s);
        prop_assert_eq!(normalize_channel_name(&once), once.clone());
        prop_assert!(!once.starts_with(' ') && !once.ends_with(' ') && !once.contains("  "));
    }

    #[test]
    fn normalize_ignores_case_and_spacing(s in "[A-Za-zÆØÅæøå ]{0,30}") {
        let spaced = format!("  {}  ", s.replace(' ', "   "));
        prop_assert_eq!(normalize_channel_name(&spaced), normalize_channel_name(&s.to_uppercase()));
    }
}
