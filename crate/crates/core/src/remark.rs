use serde::{Deserialize, Serialize};

use crate::error::CoreError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    #[default]
    Info,
    Warning,
}

/// A journalist's note on something that matters when judging the source.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RemarkRepr")]
pub struct SpecialRemark {
    text: String,
    severity: Severity,
}

#[derive(Deserialize)]
struct RemarkRepr {
    text: String,
    #[serde(default)]
    severity: Severity,
}

impl TryFrom<RemarkRepr> for SpecialRemark {
    type Error = CoreError;

    fn try_from(r: RemarkRepr) -> Result<Self, Self::Error> {
        SpecialRemark::new(r.text, r.severity)
    }
}

impl SpecialRemark {
    /// Text is kept as given; it only has to be non-blank.
    pub fn new(text: impl Into<String>, severity: Severity) -> Result<Self, CoreError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(CoreError::EmptyRemark);
        }
        Ok(Self { text, severity })
    }

    pub fn info(text: impl Into<String>) -> Result<Self, CoreError> {
        Self::new(text, Severity::Info)
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn severity(&self) -> Severity {
        self.severity
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blank_text_rejected() {
        assert_eq!(SpecialRemark::info(""), Err(CoreError::EmptyRemark));
        assert_eq!(SpecialRemark::info(" \t\n"), Err(CoreError::EmptyRemark));
        assert!(serde_json::from_str::<SpecialRemark>(r#"{"text":"  "}"#).is_err());
    }

    #[test]
    fn severity_defaults_to_info() {
        let r: SpecialRemark = serde_json::from_str(r#"{"text":"preprint"}"#).unwrap();
        assert_eq!(r.severity(), Severity::Info);
        assert_eq!(r.text(), "preprint");
    }
}
