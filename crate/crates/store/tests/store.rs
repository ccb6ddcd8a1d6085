use std::io::Write;

use chrono::{TimeZone, Utc};
use proptest::prelude::*;
use sei_core::{
    validate_assessment, Assessment, AssessmentDraft, AssessmentId, DraftRemark, EntryMode,
    Provenance, Severity,
};
use sei_store::{
    ArticleAttach, LogRecord, PutOptions, Store, StoreError, StoreOptions, StoredAssessment,
};

fn assessment(bfi: i64, rank: i64, h: i64) -> Assessment {
    let remarks = if bfi == 0 {
        vec![DraftRemark::info("conference abstract")]
    } else {
        vec![]
    };
    validate_assessment(&AssessmentDraft {
        bfi: Some(bfi),
        method_rank: Some(rank),
        team_max_h: Some(h),
        remarks,
        ..Default::default()
    })
    .unwrap()
}

fn fast() -> StoreOptions {
    StoreOptions { sync: false }
}

fn attach(article: &str) -> PutOptions {
    PutOptions {
        article: Some(ArticleAttach::new(article)),
        ..Default::default()
    }
}

fn again(id: AssessmentId) -> PutOptions {
    PutOptions {
        id: Some(id),
        ..Default::default()
    }
}

#[test]
fn versions_are_contiguous_and_immutable() {
    let dir = tempfile::tempdir().unwrap();
    let (mut store, _) = Store::open_with(dir.path().join("s.jsonl"), fast()).unwrap();
    let v1 = store.put(assessment(2, 2, 25), PutOptions::default()).unwrap();
    let id = v1.assessment.id;
    assert_eq!(v1.assessment.version, 1);
    assert_eq!(v1.supersedes, None);

    let v2 = store.put(assessment(2, 3, 25), again(id)).unwrap();
    assert_eq!(v2.assessment.version, 2);
    assert_eq!(v2.supersedes, Some(v1.version_ref()));

    assert_eq!(store.get(id, None).unwrap(), &v2);
    assert_eq!(store.get(id, Some(1)).unwrap(), &v1);
    assert!(matches!(
        store.get(id, Some(3)),
        Err(StoreError::NotFound { version: Some(3), .. })
    ));
    assert!(matches!(
        store.get(AssessmentId::new_random(), None),
        Err(StoreError::NotFound { .. })
    ));
}

#[test]
fn stale_expected_version_conflicts() {
    let dir = tempfile::tempdir().unwrap();
    let (mut store, _) = Store::open_with(dir.path().join("s.jsonl"), fast()).unwrap();
    let id = store.put(assessment(1, 3, 5), PutOptions::default()).unwrap().assessment.id;
    store.put(assessment(1, 3, 6), again(id)).unwrap();
    let stale = PutOptions {
        expected_version: Some(1),
        ..again(id)
    };
    match store.put(assessment(1, 3, 7), stale) {
        Err(StoreError::VersionConflict { expected: 1, actual: 2, .. }) => {}
        other => panic!("expected conflict, got {other:?}"),
    }
    let fresh = PutOptions {
        expected_version: Some(2),
        ..again(id)
    };
    assert_eq!(store.put(assessment(1, 3, 7), fresh).unwrap().assessment.version, 3);

    let must_be_new = PutOptions {
        expected_version: Some(0),
        ..again(id)
    };
    assert!(matches!(
        store.put(assessment(1, 3, 8), must_be_new),
        Err(StoreError::VersionConflict { .. })
    ));
    assert_eq!(store.state().history(id).len(), 3);
}

#[test]
fn list_by_article_returns_heads_in_attachment_order() {
    let dir = tempfile::tempdir().unwrap();
    let (mut store, _) = Store::open_with(dir.path().join("s.jsonl"), fast()).unwrap();
    let a = store.put(assessment(3, 1, 30), attach("story-1")).unwrap().assessment.id;
    let b = store.put(assessment(1, 5, 3), attach("story-1")).unwrap().assessment.id;
    store.put(assessment(2, 2, 2), attach("story-2")).unwrap();

    let ids = |s: &Store| -> Vec<_> {
        s.list_by_article("story-1")
            .iter()
            .map(|x| (x.assessment.id, x.assessment.version))
            .collect()
    };
    assert_eq!(ids(&store), [(a, 1), (b, 1)]);

    // re-assessing A keeps its slot and inherits the article
    let a2 = store.put(assessment(3, 1, 31), again(a)).unwrap();
    assert_eq!(a2.article_id.as_deref(), Some("story-1"));
    assert_eq!(ids(&store), [(a, 2), (b, 1)]);

    // attaching again never duplicates
    store
        .put(assessment(1, 5, 4), PutOptions { id: Some(b), ..attach("story-1") })
        .unwrap();
    assert_eq!(store.state().article("story-1").unwrap().assessment_ids, [a, b]);
    assert!(store.list_by_article("nope").is_empty());
}

#[test]
fn article_metadata_is_recorded_once_and_updated() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.jsonl");
    let (mut store, _) = Store::open_with(&path, fast()).unwrap();
    let titled = |title: &str| PutOptions {
        article: Some(ArticleAttach {
            article_id: "story".into(),
            title: Some(title.into()),
            url: Some("https://example.org/story".into()),
        }),
        ..Default::default()
    };
    store.put(assessment(1, 3, 5), titled("Coffee and sleep")).unwrap();
    store.put(assessment(1, 3, 5), titled("Coffee and sleep")).unwrap();
    store.put(assessment(1, 3, 5), attach("story")).unwrap();
    store.put(assessment(1, 3, 5), titled("Coffee, tea and sleep")).unwrap();

    let kinds: Vec<String> = std::fs::read_to_string(&path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["kind"].as_str().unwrap().to_owned())
        .collect();
    assert_eq!(kinds, ["article", "assessment", "assessment", "assessment", "article", "assessment"]);
    let art = store.state().article("story").unwrap();
    assert_eq!(art.title, "Coffee, tea and sleep");
    assert_eq!(art.url.as_deref(), Some("https://example.org/story"));
    assert_eq!(art.assessment_ids.len(), 4);
}

#[test]
fn lines_are_canonical_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.jsonl");
    let (mut store, _) = Store::open_with(&path, fast()).unwrap();
    let when = Utc.with_ymd_and_hms(2019, 5, 1, 12, 0, 0).unwrap();
    let opts = PutOptions {
        created_at: Some(when),
        ..attach("a1")
    };
    let stored = store.put(assessment(2, 2, 21), opts).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let expected = format!(
        concat!(
            r#"{{"kind":"assessment","record":{{"article_id":"a1","assessment":{{"bfi":2,"bfi_channel_found":true,"#,
            r#""created_at":"2019-05-01T12:00:00Z","entered_by":"manual","evidence":"high","experience":"experienced","#,
            r#""id":"{}","method":2,"#,
            r#""remarks":[],"team_max_h":21,"version":1}},"supersedes":null}}}}"#,
            "\n"
        ),
        stored.assessment.id
    );
    assert_eq!(text, expected);
}

#[test]
fn torn_trailing_record_is_discarded_at_every_cut() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.jsonl");
    let (mut store, _) = Store::open_with(&path, fast()).unwrap();
    let id = store.put(assessment(2, 2, 25), attach("x")).unwrap().assessment.id;
    store.put(assessment(2, 2, 26), again(id)).unwrap();
    let before_last = std::fs::read(&path).unwrap().len();
    store.put(assessment(2, 2, 27), again(id)).unwrap();
    let complete_state = store.state().clone();
    drop(store);
    let full = std::fs::read(&path).unwrap();

    let expected_partial = {
        std::fs::write(&path, &full[..before_last]).unwrap();
        Store::replay(&path).unwrap()
    };
    for cut in before_last + 1..full.len() {
        std::fs::write(&path, &full[..cut]).unwrap();
        let (store, report) = Store::open_with(&path, fast()).unwrap();
        assert_eq!(report.truncated_bytes, (cut - before_last) as u64);
        assert_eq!(store.state(), &expected_partial, "cut at {cut}");
        assert_eq!(store.get(id, None).unwrap().assessment.version, 2);
        drop(store);
        assert_eq!(std::fs::read(&path).unwrap().len(), before_last);
    }

    std::fs::write(&path, &full).unwrap();
    let (mut store, report) = Store::open_with(&path, fast()).unwrap();
    assert_eq!(report.truncated_bytes, 0);
    assert_eq!(store.state(), &complete_state);
    // writing after recovery continues the chain
    assert_eq!(store.put(assessment(2, 2, 28), again(id)).unwrap().assessment.version, 4);
}

#[test]
fn corruption_before_the_tail_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.jsonl");
    let (mut store, _) = Store::open_with(&path, fast()).unwrap();
    store.put(assessment(1, 1, 1), PutOptions::default()).unwrap();
    store.put(assessment(1, 1, 2), PutOptions::default()).unwrap();
    drop(store);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines[0] = "{\"kind\":\"assessment\"";
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    match Store::open(&path) {
        Err(StoreError::Corrupt { line: 1, .. }) => {}
        other => panic!("expected corruption error, got {other:?}"),
    }
}

#[test]
fn tampered_records_are_rejected_on_replay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.jsonl");
    let (mut store, _) = Store::open_with(&path, fast()).unwrap();
    let v1 = store.put(assessment(2, 2, 25), PutOptions::default()).unwrap();
    drop(store);
    let line = std::fs::read_to_string(&path).unwrap();

    let tamper = |from: &str, to: &str| {
        assert!(line.contains(from));
        std::fs::write(&path, line.replace(from, to)).unwrap();
        Store::open(&path)
    };
    // stored evidence disagrees with the variables
    assert!(matches!(tamper(r#""evidence":"high""#, r#""evidence":"low""#), Err(StoreError::Corrupt { .. })));
    // version gap
    assert!(matches!(tamper(r#""version":1"#, r#""version":2"#), Err(StoreError::Corrupt { .. })));
    // duplicated version
    std::fs::write(&path, format!("{line}{line}")).unwrap();
    assert!(matches!(Store::open(&path), Err(StoreError::Corrupt { line: 2, .. })));

    std::fs::write(&path, &line).unwrap();
    let (store, _) = Store::open(&path).unwrap();
    assert_eq!(store.get(v1.assessment.id, None).unwrap(), &v1);
}

#[test]
fn appends_go_to_a_followed_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.jsonl");
    let (mut store, _) = Store::open(&path).unwrap();
    store.put(assessment(1, 2, 3), PutOptions::default()).unwrap();
    drop(store);
    // a file whose last line lacks a newline but is otherwise valid is
    // still treated as torn: completeness is the terminator
    let text = std::fs::read_to_string(&path).unwrap();
    let mut f = std::fs::OpenOptions::new().append(true).open(&path).unwrap();
    f.write_all(text.trim_end().as_bytes()).unwrap();
    drop(f);
    let (store, report) = Store::open(&path).unwrap();
    assert_eq!(report.truncated_bytes as usize, text.len() - 1);
    assert_eq!(store.state().record_count(), 1);
}

fn arb_assessment() -> impl Strategy<Value = Assessment> {
    (
        0i64..=3,
        1i64..=7,
        prop_oneof![
            (0i64..200).prop_map(|h| (Some(h), None)),
            prop::collection::vec(prop::collection::vec(0i64..500, 0..12), 1..4)
                .prop_map(|cs| (None, Some(cs))),
        ],
        prop::collection::vec(("[a-zA-Zæøå ,.]{1,30}", any::<bool>()), 0..3),
        any::<bool>(),
        prop::option::of("10\\.[0-9]{4}/[a-z0-9-]{1,10}"),
    )
        .prop_filter_map("unreviewed needs a remark", |(bfi, rank, team, remarks, auto, doi)| {
            let remarks: Vec<DraftRemark> = remarks
                .into_iter()
                .filter(|(t, _)| !t.trim().is_empty())
                .map(|(text, warn)| DraftRemark {
                    text,
                    severity: if warn { Severity::Warning } else { Severity::Info },
                })
                .collect();
            let authors = team.1.map(|cs| {
                cs.into_iter()
                    .enumerate()
                    .map(|(i, c)| sei_core::DraftProfile {
                        author_name: format!("Author {i}"),
                        citations: Some(c),
                        precomputed_h: None,
                    })
                    .collect()
            });
            validate_assessment(&AssessmentDraft {
                bfi: Some(bfi),
                bfi_channel_found: Some(bfi > 0),
                method_rank: Some(rank),
                team_max_h: team.0,
                authors,
                remarks,
                entered_by: if auto { EntryMode::Automated } else { EntryMode::Manual },
                provenance: Provenance {
                    doi,
                    ..Default::default()
                },
            })
            .ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn stored_assessment_round_trips(a in arb_assessment(), version in 1u32..50, article in prop::option::of("[a-z0-9-]{1,12}")) {
        let id = AssessmentId::new_random();
        let rec = StoredAssessment {
            assessment: sei_core::SourceAssessment { id, version, created_at: Utc::now(), assessment: a },
            article_id: article,
            supersedes: (version > 1).then_some(sei_store::VersionRef { id, version: version - 1 }),
        };
        let line = sei_core::canonical_json(&LogRecord::Assessment(rec.clone())).unwrap();
        prop_assert!(!line.contains('\n'));
        let back: LogRecord = serde_json::from_str(&line).unwrap();
        prop_assert_eq!(back, LogRecord::Assessment(rec));
    }

    #[test]
    fn replay_equals_live_state(ops in prop::collection::vec((arb_assessment(), 0usize..6, prop::option::of(0usize..3)), 1..40)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.jsonl");
        let (mut store, _) = Store::open_with(&path, fast()).unwrap();
        let mut ids: Vec<AssessmentId> = Vec::new();
        for (a, pick, article) in ops {
            let opts = PutOptions {
                id: ids.get(pick).copied(),
                article: article.map(|n| ArticleAttach::new(format!("art-{n}"))),
                ..Default::default()
            };
            let stored = store.put(a, opts).unwrap();
            if stored.assessment.version == 1 {
                ids.push(stored.assessment.id);
            }
        }
        let replayed = Store::replay(&path).unwrap();
        prop_assert_eq!(&replayed, store.state());
        for id in &ids {
            let history = replayed.history(*id);
            for (i, v) in history.iter().enumerate() {
                prop_assert_eq!(v.assessment.version as usize, i + 1);
            }
        }
    }
}
