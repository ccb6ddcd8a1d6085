use std::collections::HashMap;
use std::fmt;
use std::io::Read;

use sei_core::BfiLevel;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::issn::{Issn, IssnError};
use crate::normalize::normalize_channel_name;

/// Required first non-comment row of a registry file.
pub const HEADER: [&str; 3] = ["issn", "channel_name", "bfi_level"];

/// The bundled, non-authoritative 20-channel demo registry.
pub const DEMO_REGISTRY_CSV: &str = include_str!("../data/demo_registry.csv");

/// One publication channel. A channel with several ISSNs (print, online)
/// appears once with all of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelRecord {
    pub canonical_name: String,
    pub issns: Vec<Issn>,
    pub bfi_level: BfiLevel,
}

/// An immutable, indexed set of channels.
#[derive(Debug, Clone)]
pub struct Registry {
    records: Vec<ChannelRecord>,
    by_issn: HashMap<Issn, usize>,
    by_name: HashMap<String, usize>,
    source_version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiagnosticKind {
    Parse { reason: String },
    BadHeader { found: String },
    MalformedIssn { reason: String },
    InvalidBfiLevel { value: String },
    EmptyName,
    DuplicateIssn { issn: String, first_line: u64 },
    NameLevelConflict { name: String, first_line: u64 },
}

/// One problem found while loading, located by 1-based line (and column
/// when it concerns a single field).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub line: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<u64>,
    #[serde(flatten)]
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.column {
            Some(c) => write!(f, "line {}, column {}: ", self.line, c)?,
            None => write!(f, "line {}: ", self.line)?,
        }
        match &self.kind {
            DiagnosticKind::Parse { reason } => write!(f, "parse error: {reason}"),
            DiagnosticKind::BadHeader { found } => write!(
                f,
                "header must be `{}`, found `{found}`",
                HEADER.join(",")
            ),
            DiagnosticKind::MalformedIssn { reason } => write!(f, "malformed ISSN: {reason}"),
            DiagnosticKind::InvalidBfiLevel { value } => {
                write!(f, "invalid bfi_level `{value}`: expected 1, 2 or 3")
            }
            DiagnosticKind::EmptyName => write!(f, "channel_name is empty"),
            DiagnosticKind::DuplicateIssn { issn, first_line } => write!(
                f,
                "duplicate ISSN {issn} (first seen on line {first_line}, again on line {})",
                self.line
            ),
            DiagnosticKind::NameLevelConflict { name, first_line } => write!(
                f,
                "channel `{name}` has a different bfi_level than on line {first_line}"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read registry: {0}")]
    Io(#[from] std::io::Error),
    #[error("registry has {} problem(s); first: {}", .0.len(), .0[0])]
    Invalid(Vec<Diagnostic>),
}

impl LoadError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            LoadError::Invalid(d) => d,
            LoadError::Io(_) => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error(transparent)]
    MalformedIssn(#[from] IssnError),
}

/// How the journalist identifies a channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelQuery {
    Issn(String),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lookup {
    pub bfi: BfiLevel,
    pub found: bool,
    pub matched: Option<ChannelRecord>,
}

impl Lookup {
    fn miss() -> Self {
        Lookup {
            bfi: BfiLevel::UNLISTED,
            found: false,
            matched: None,
        }
    }

    fn hit(record: &ChannelRecord) -> Self {
        Lookup {
            bfi: record.bfi_level,
            found: true,
            matched: Some(record.clone()),
        }
    }
}

struct Row {
    line: u64,
    issn: Issn,
    name: String,
    level: BfiLevel,
}

/// Parses a registry file, reporting every malformed, duplicate or
/// conflicting row rather than stopping at the first.
pub fn load_registry<R: Read>(source: R) -> Result<Registry, LoadError> {
    let mut source = source;
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let text = match String::from_utf8(bytes) {
        Ok(s) => s,
        Err(e) => {
            let offset = e.utf8_error().valid_up_to();
            let line = e.as_bytes()[..offset].iter().filter(|&&b| b == b'\n').count() as u64 + 1;
            return Err(LoadError::Invalid(vec![Diagnostic {
                line,
                column: None,
                kind: DiagnosticKind::Parse {
                    reason: "invalid UTF-8".into(),
                },
            }]));
        }
    };
    let text = text.strip_prefix('\u{feff}').unwrap_or(&text);
    let source_version = text
        .lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .find_map(|l| l.trim().strip_prefix("source_version:"))
        .map(|v| v.trim().to_owned())
        .unwrap_or_else(|| "unversioned".to_owned());

    let mut diags = Vec::new();
    let mut rows = Vec::new();
    let mut saw_header = false;
    // Rows are single lines; parsing each line separately keeps diagnostics
    // on true file line numbers with comments and blank lines in place.
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx as u64 + 1;
        if raw_line.trim().is_empty() || raw_line.trim_start().starts_with('#') {
            continue;
        }
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(raw_line.as_bytes());
        let record = match reader.records().next() {
            Some(Ok(r)) => r,
            Some(Err(e)) => {
                diags.push(Diagnostic {
                    line,
                    column: None,
                    kind: DiagnosticKind::Parse {
                        reason: e.to_string(),
                    },
                });
                continue;
            }
            None => continue,
        };
        if !saw_header {
            saw_header = true;
            let fields: Vec<&str> = record.iter().map(str::trim).collect();
            if fields != HEADER {
                diags.push(Diagnostic {
                    line,
                    column: None,
                    kind: DiagnosticKind::BadHeader {
                        found: record.iter().collect::<Vec<_>>().join(","),
                    },
                });
                return Err(LoadError::Invalid(diags));
            }
            continue;
        }
        if record.len() != HEADER.len() {
            diags.push(Diagnostic {
                line,
                column: None,
                kind: DiagnosticKind::Parse {
                    reason: format!("expected {} fields, found {}", HEADER.len(), record.len()),
                },
            });
            continue;
        }
        let issn = Issn::parse(&record[0]).map_err(|e| Diagnostic {
            line,
            column: Some(1),
            kind: DiagnosticKind::MalformedIssn {
                reason: e.to_string(),
            },
        });
        let name = record[1].trim().to_owned();
        let name_ok = if normalize_channel_name(&name).is_empty() {
            Err(Diagnostic {
                line,
                column: Some(2),
                kind: DiagnosticKind::EmptyName,
            })
        } else {
            Ok(())
        };
        let raw_level = record[2].trim();
        let level = raw_level
            .parse::<i64>()
            .ok()
            .filter(|v| (1..=3).contains(v))
            .and_then(|v| BfiLevel::new(v).ok())
            .ok_or_else(|| Diagnostic {
                line,
                column: Some(3),
                kind: DiagnosticKind::InvalidBfiLevel {
                    value: raw_level.to_owned(),
                },
            });
        match (issn, name_ok, level) {
            (Ok(issn), Ok(()), Ok(level)) => rows.push(Row {
                line,
                issn,
                name,
                level,
            }),
            (issn, name_ok, level) => {
                diags.extend(issn.err());
                diags.extend(name_ok.err());
                diags.extend(level.err());
            }
        }
    }
    if !saw_header {
        diags.push(Diagnostic {
            line: 1,
            column: None,
            kind: DiagnosticKind::BadHeader {
                found: String::new(),
            },
        });
    }

    let mut records: Vec<ChannelRecord> = Vec::new();
    let mut by_issn: HashMap<Issn, usize> = HashMap::new();
    let mut issn_lines: HashMap<Issn, u64> = HashMap::new();
    let mut by_name: HashMap<String, usize> = HashMap::new();
    let mut name_lines: HashMap<String, u64> = HashMap::new();
    for row in rows {
        if let Some(&first_line) = issn_lines.get(&row.issn) {
            diags.push(Diagnostic {
                line: row.line,
                column: Some(1),
                kind: DiagnosticKind::DuplicateIssn {
                    issn: row.issn.to_string(),
                    first_line,
                },
            });
            continue;
        }
        let key = normalize_channel_name(&row.name);
        let idx = match by_name.get(&key) {
            Some(&idx) if records[idx].bfi_level != row.level => {
                diags.push(Diagnostic {
                    line: row.line,
                    column: Some(3),
                    kind: DiagnosticKind::NameLevelConflict {
                        name: row.name,
                        first_line: name_lines[&key],
                    },
                });
                continue;
            }
            Some(&idx) => idx,
            None => {
                records.push(ChannelRecord {
                    canonical_name: row.name,
                    issns: Vec::new(),
                    bfi_level: row.level,
                });
                by_name.insert(key.clone(), records.len() - 1);
                name_lines.insert(key, row.line);
                records.len() - 1
            }
        };
        records[idx].issns.push(row.issn.clone());
        issn_lines.insert(row.issn.clone(), row.line);
        by_issn.insert(row.issn, idx);
    }

    if !diags.is_empty() {
        diags.sort_by_key(|d| (d.line, d.column));
        return Err(LoadError::Invalid(diags));
    }
    Ok(Registry {
        records,
        by_issn,
        by_name,
        source_version,
    })
}

/// The bundled demo registry.
pub fn demo_registry() -> Registry {
    load_registry(DEMO_REGISTRY_CSV.as_bytes()).expect("bundled demo registry is well-formed")
}

/// Resolves a channel to its BFI level. Absence is level 0 with `found = false`.
pub fn lookup_channel(registry: &Registry, query: &ChannelQuery) -> Result<Lookup, LookupError> {
    let record = match query {
        ChannelQuery::Issn(raw) => registry.by_issn(&Issn::parse(raw)?),
        ChannelQuery::Name(name) => registry.by_name(name),
    };
    Ok(record.map_or_else(Lookup::miss, Lookup::hit))
}

impl Registry {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Number of distinct ISSNs.
    pub fn issn_count(&self) -> usize {
        self.by_issn.len()
    }

    pub fn records(&self) -> &[ChannelRecord] {
        &self.records
    }

    pub fn source_version(&self) -> &str {
        &self.source_version
    }

    pub fn by_issn(&self, issn: &Issn) -> Option<&ChannelRecord> {
        self.by_issn.get(issn).map(|&i| &self.records[i])
    }

    pub fn by_name(&self, name: &str) -> Option<&ChannelRecord> {
        self.by_name
            .get(&normalize_channel_name(name))
            .map(|&i| &self.records[i])
    }

    /// Channels whose normalized name contains the normalized query. Prefix
    /// matches come first; each group is ordered by normalized name.
    pub fn search(&self, query: &str, limit: usize) -> Vec<&ChannelRecord> {
        let q = normalize_channel_name(query);
        let mut hits: Vec<(bool, String, &ChannelRecord)> = self
            .records
            .iter()
            .filter_map(|r| {
                let key = normalize_channel_name(&r.canonical_name);
                key.find(&q).map(|pos| (pos != 0, key, r))
            })
            .collect();
        hits.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        hits.into_iter().take(limit).map(|(_, _, r)| r).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(s: &str) -> Result<Registry, LoadError> {
        load_registry(s.as_bytes())
    }

    #[test]
    fn three_rows() {
        let r = load("issn,channel_name,bfi_level\n0140-6736,The Lancet,3\n0028-4793,NEJM,3\n2044-6055,BMJ Open,1\n").unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.source_version(), "unversioned");
    }

    #[test]
    fn duplicate_issn_names_both_lines() {
        let err = load("issn,channel_name,bfi_level\n1234-5679,A,1\n# comment\n1234-5679,B,2\n").unwrap_err();
        let d = err.diagnostics();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].line, 4);
        assert_eq!(
            d[0].kind,
            DiagnosticKind::DuplicateIssn {
                issn: "1234-5679".into(),
                first_line: 2
            }
        );
        let msg = d[0].to_string();
        assert!(msg.contains("line 2") && msg.contains("line 4"), "{msg}");
    }

    #[test]
    fn multi_issn_channel_is_one_record() {
        let r = load("issn,channel_name,bfi_level\n0959-8138,BMJ,3\n1756-1833,bmj,3\n").unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.issn_count(), 2);
        assert_eq!(r.records()[0].issns.len(), 2);
    }

    #[test]
    fn name_level_conflict() {
        let err = load("issn,channel_name,bfi_level\n0959-8138,BMJ,3\n1756-1833,B.M.J.,2\n").unwrap_err();
        assert!(matches!(
            err.diagnostics()[0].kind,
            DiagnosticKind::NameLevelConflict { first_line: 2, .. }
        ));
    }

    #[test]
    fn bad_rows_all_reported() {
        let text = "issn,channel_name,bfi_level\n1234-5678,A,1\n0140-6736,,2\n0028-4793,C,0\n2044-6055,D\n0098-7484,E,x\n";
        let err = load(text).unwrap_err();
        let kinds: Vec<_> = err.diagnostics().iter().map(|d| (d.line, d.column)).collect();
        assert_eq!(
            kinds,
            vec![(2, Some(1)), (3, Some(2)), (4, Some(3)), (5, None), (6, Some(3))]
        );
    }

    #[test]
    fn header_required() {
        assert!(matches!(
            load("issn,name,level\n").unwrap_err().diagnostics()[0].kind,
            DiagnosticKind::BadHeader { .. }
        ));
        assert!(load("").is_err());
        assert!(load("# only a comment\n").is_err());
        assert_eq!(load("issn,channel_name,bfi_level\n").unwrap().len(), 0);
    }

    #[test]
    fn invalid_utf8() {
        let mut bytes = b"issn,channel_name,bfi_level\n0140-6736,".to_vec();
        bytes.extend([0xff, 0xfe]);
        bytes.extend(b",3\n");
        let err = load_registry(&bytes[..]).unwrap_err();
        assert_eq!(err.diagnostics()[0].line, 2);
    }

    #[test]
    fn quoted_names_with_commas() {
        let r = load("issn,channel_name,bfi_level\n0140-6736,\"Lancet, The\",3\n").unwrap();
        assert_eq!(r.records()[0].canonical_name, "Lancet, The");
        assert!(r.by_name("lancet the").is_some());
    }

    #[test]
    fn lookups() {
        let r = demo_registry();
        assert_eq!(r.len(), 20);
        assert_eq!(r.source_version(), "demo-2019-illustrative");

        let hit = lookup_channel(&r, &ChannelQuery::Issn("0003-4819".into())).unwrap();
        assert_eq!((hit.bfi.value(), hit.found), (2, true));

        let name = lookup_channel(&r, &ChannelQuery::Name("The  Lancet ".into())).unwrap();
        assert!(name.found);
        assert_eq!(name.matched.unwrap().canonical_name, "The Lancet");

        let miss = lookup_channel(&r, &ChannelQuery::Issn("1234-5679".into())).unwrap();
        assert_eq!((miss.bfi, miss.found, miss.matched), (BfiLevel::UNLISTED, false, None));

        assert!(matches!(
            lookup_channel(&r, &ChannelQuery::Issn("1234-5678".into())),
            Err(LookupError::MalformedIssn(_))
        ));
        let laeger = lookup_channel(&r, &ChannelQuery::Name("UGESKRIFT FOR LAEGER".into())).unwrap();
        assert_eq!(laeger.bfi.value(), 1);
    }

    #[test]
    fn search_prefix_first() {
        let r = demo_registry();
        let names: Vec<_> = r.search("lancet", 10).iter().map(|c| c.canonical_name.as_str()).collect();
        assert_eq!(names, vec!["The Lancet", "The Lancet Oncology"]);
        let names: Vec<_> = r.search("jama", 10).iter().map(|c| c.canonical_name.as_str()).collect();
        assert_eq!(names, vec!["JAMA", "JAMA Internal Medicine"]);
        let names: Vec<_> = r.search("medicine", 3).iter().map(|c| c.canonical_name.as_str()).collect();
        assert_eq!(names.len(), 3);
        assert_eq!(r.search("", 100).len(), 20);
    }
}
