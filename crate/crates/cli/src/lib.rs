//! Batch scoring of source assessments from CSV.
//!
//! Input is UTF-8 CSV with the header `channel,method,h_indices,remarks`.
//! Lines starting with `#` are comments. Each data row is one source:
//!
//! * `channel`: an ISSN (`0140-6736`) or a channel name, resolved against
//!   the registry;
//! * `method`: a rank from 1 to 7, or study-design text classified by the
//!   method rule list;
//! * `h_indices`: one entry per author separated by `;`, each an h-index
//!   (`25`) or a bracketed citation list (`[10 8 5 4 3]`);
//! * `remarks`: free text, recorded as a single remark when non-blank.
//!
//! Rows are validated independently; a bad row is reported and the batch
//! goes on.

use std::io::Read;

use sei_core::{
    DraftProfile, DraftRemark, ErrorCode, EvidenceLevel, ExperienceLevel, ValidationIssue,
};
use sei_gateway::{assess_entry, ChannelInput, ManualEntry, MethodInput};
use sei_registry::{Issn, Registry};
use serde::{Deserialize, Serialize};

pub const INPUT_HEADER: [&str; 4] = ["channel", "method", "h_indices", "remarks"];

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("input is not valid UTF-8")]
    Encoding,
    #[error("input header must be `{expected}`, found `{found}`", expected = INPUT_HEADER.join(","))]
    Header { found: String },
    #[error("input is not valid CSV: {0}")]
    Csv(#[from] csv::Error),
}

/// One input row, as the CSV fields were written.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRow {
    pub channel: String,
    pub method: String,
    pub h_indices: String,
    pub remarks: String,
}

/// A row is either parsed into fields or structurally broken.
pub type ParsedRow = Result<InputRow, RowIssue>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowIssue {
    pub code: String,
    pub field: String,
    pub message: String,
}

impl From<&ValidationIssue> for RowIssue {
    fn from(i: &ValidationIssue) -> Self {
        RowIssue {
            code: i.code.as_str().to_owned(),
            field: i.field.clone(),
            message: i.message.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreRow {
    /// 1-based position among the data rows.
    pub row: usize,
    pub status: RowStatus,
    pub channel: String,
    pub bfi: Option<u8>,
    pub bfi_channel_found: Option<bool>,
    pub method_rank: Option<u8>,
    pub team_max_h: Option<u32>,
    pub experience: Option<ExperienceLevel>,
    pub evidence: Option<EvidenceLevel>,
    pub errors: Vec<RowIssue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub total: usize,
    pub valid: usize,
    pub invalid: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreReport {
    pub rows: Vec<ScoreRow>,
    pub summary: Summary,
}

impl ScoreReport {
    pub fn all_valid(&self) -> bool {
        self.summary.invalid == 0
    }
}

/// Splits the input into rows. Only unreadable or unrecognisable input is
/// an error; a row with the wrong number of fields becomes a row issue.
pub fn read_rows<R: Read>(mut source: R) -> Result<Vec<ParsedRow>, InputError> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let text = String::from_utf8(bytes).map_err(|_| InputError::Encoding)?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(&text);
    if text.lines().all(|l| l.trim().is_empty() || l.starts_with('#')) {
        return Ok(Vec::new());
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_owned()).collect();
    if header != INPUT_HEADER {
        return Err(InputError::Header {
            found: header.join(","),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.len() == 1 && record[0].trim().is_empty() {
            continue;
        }
        rows.push(if record.len() == INPUT_HEADER.len() {
            Ok(InputRow {
                channel: record[0].to_owned(),
                method: record[1].to_owned(),
                h_indices: record[2].to_owned(),
                remarks: record[3].to_owned(),
            })
        } else {
            Err(RowIssue {
                code: "MALFORMED_ROW".into(),
                field: String::new(),
                message: format!("expected {} fields, found {}", INPUT_HEADER.len(), record.len()),
            })
        });
    }
    Ok(rows)
}

fn parse_int(s: &str) -> Option<i64> {
    s.parse().ok()
}

fn parse_authors(field: &str) -> Result<Option<Vec<DraftProfile>>, Vec<ValidationIssue>> {
    let entries: Vec<&str> = field.split(';').map(str::trim).filter(|e| !e.is_empty()).collect();
    if entries.is_empty() {
        return Ok(None);
    }
    let mut authors = Vec::new();
    let mut issues = Vec::new();
    for (i, entry) in entries.iter().enumerate() {
        let author_name = format!("author {}", i + 1);
        let bad = |what: &str| {
            ValidationIssue::new(
                ErrorCode::MalformedHIndex,
                format!("h_indices[{i}]"),
                format!("`{entry}` is not {what}"),
            )
        };
        if let Some(inner) = entry.strip_prefix('[').and_then(|e| e.strip_suffix(']')) {
            let counts: Option<Vec<i64>> = inner
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(parse_int)
                .collect();
            match counts {
                Some(citations) => authors.push(DraftProfile {
                    author_name,
                    citations: Some(citations),
                    precomputed_h: None,
                }),
                None => issues.push(bad("a list of citation counts")),
            }
        } else {
            match parse_int(entry) {
                Some(h) => authors.push(DraftProfile {
                    author_name,
                    citations: None,
                    precomputed_h: Some(h),
                }),
                None => issues.push(bad("an integer h-index or a [citation list]")),
            }
        }
    }
    if issues.is_empty() {
        Ok(Some(authors))
    } else {
        Err(issues)
    }
}

/// Maps CSV fields onto the same entry shape the HTTP service accepts.
pub fn row_to_entry(row: &InputRow) -> Result<ManualEntry, Vec<ValidationIssue>> {
    let channel = row.channel.trim();
    let method = row.method.trim();
    let remarks = row.remarks.trim();
    let authors = parse_authors(&row.h_indices)?;
    Ok(ManualEntry {
        channel: match channel {
            "" => None,
            c if Issn::looks_like(c) => Some(ChannelInput::Issn(c.to_owned())),
            c => Some(ChannelInput::Name(c.to_owned())),
        },
        method: match method {
            "" => None,
            m => Some(parse_int(m).map_or_else(|| MethodInput::Text(m.to_owned()), MethodInput::Rank)),
        },
        authors,
        remarks: if remarks.is_empty() {
            Vec::new()
        } else {
            vec![DraftRemark::info(remarks)]
        },
        ..Default::default()
    })
}

pub fn score_row(index: usize, row: &ParsedRow, registry: &Registry) -> ScoreRow {
    let mut out = ScoreRow {
        row: index + 1,
        status: RowStatus::Error,
        channel: row.as_ref().map(|r| r.channel.trim().to_owned()).unwrap_or_default(),
        bfi: None,
        bfi_channel_found: None,
        method_rank: None,
        team_max_h: None,
        experience: None,
        evidence: None,
        errors: Vec::new(),
    };
    let row = match row {
        Ok(r) => r,
        Err(issue) => {
            out.errors.push(issue.clone());
            return out;
        }
    };
    let result = row_to_entry(row).and_then(|entry| {
        assess_entry(&entry, registry).map_err(|e| e.iter().cloned().collect())
    });
    match result {
        Ok(a) => {
            out.status = RowStatus::Ok;
            out.bfi = Some(a.bfi().value());
            out.bfi_channel_found = Some(a.bfi_channel_found());
            out.method_rank = Some(a.method().rank());
            out.team_max_h = Some(a.team_max_h());
            out.experience = Some(a.experience());
            out.evidence = Some(a.evidence());
        }
        Err(issues) => out.errors = issues.iter().map(RowIssue::from).collect(),
    }
    out
}

pub fn score_rows(rows: &[ParsedRow], registry: &Registry) -> ScoreReport {
    let rows: Vec<ScoreRow> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| score_row(i, r, registry))
        .collect();
    let valid = rows.iter().filter(|r| r.status == RowStatus::Ok).count();
    ScoreReport {
        summary: Summary {
            total: rows.len(),
            valid,
            invalid: rows.len() - valid,
        },
        rows,
    }
}

fn dash<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_owned(), |x| x.to_string())
}

/// Plain-text table, one line per row plus a summary line.
pub fn render_table(report: &ScoreReport) -> String {
    let mut out = format!(
        "{:<5} {:<28} {:>3} {:>4} {:>5}  {:<18} {}\n",
        "row", "channel", "bfi", "rank", "max_h", "experience", "evidence"
    );
    for r in &report.rows {
        let mut channel: String = r.channel.chars().take(28).collect();
        if channel.is_empty() {
            channel.push('-');
        }
        let outcome = match r.evidence {
            Some(e) => e.as_str().to_owned(),
            None => {
                let codes: Vec<&str> = r.errors.iter().map(|e| e.code.as_str()).collect();
                format!("error: {}", codes.join(","))
            }
        };
        out.push_str(&format!(
            "{:<5} {:<28} {:>3} {:>4} {:>5}  {:<18} {}\n",
            r.row,
            channel,
            dash(r.bfi),
            dash(r.method_rank),
            dash(r.team_max_h),
            dash(r.experience.map(ExperienceLevel::label)),
            outcome
        ));
    }
    out.push_str(&format!(
        "{} rows, {} valid, {} invalid\n",
        report.summary.total, report.summary.valid, report.summary.invalid
    ));
    out
}
