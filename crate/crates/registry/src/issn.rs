use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IssnError {
    #[error("`{0}` is not of the form NNNN-NNNC")]
    Format(String),
    #[error("`{0}` has a bad check character (expected {1})")]
    CheckDigit(String, char),
}

/// A validated ISSN in `NNNN-NNNC` form with an upper-case `X` check character.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Issn(String);

impl Issn {
    pub fn parse(raw: &str) -> Result<Self, IssnError> {
        let s = raw.trim();
        let b = s.as_bytes();
        let shape_ok = b.len() == 9
            && b[4] == b'-'
            && b[..4].iter().chain(&b[5..8]).all(u8::is_ascii_digit)
            && (b[8].is_ascii_digit() || b[8] == b'X' || b[8] == b'x');
        if !shape_ok {
            return Err(IssnError::Format(raw.to_owned()));
        }
        let digits = b[..4].iter().chain(&b[5..8]).map(|d| u32::from(d - b'0'));
        let sum: u32 = digits.zip((2..=8).rev()).map(|(d, w)| d * w).sum();
        let expected = match (11 - sum % 11) % 11 {
            10 => 'X',
            c => char::from_digit(c, 10).unwrap(),
        };
        let given = (b[8] as char).to_ascii_uppercase();
        if given != expected {
            return Err(IssnError::CheckDigit(raw.to_owned(), expected));
        }
        Ok(Issn(s.to_ascii_uppercase()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True if `raw` has the NNNN-NNNC shape, regardless of its check character.
    pub fn looks_like(raw: &str) -> bool {
        !matches!(Issn::parse(raw), Err(IssnError::Format(_)))
    }
}

impl fmt::Display for Issn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Issn {
    type Err = IssnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Issn::parse(s)
    }
}

impl TryFrom<String> for Issn {
    type Error = IssnError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        Issn::parse(&s)
    }
}

impl From<Issn> for String {
    fn from(i: Issn) -> String {
        i.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_issns() {
        for s in ["1234-5679", "0140-6736", "1469-493X", "0732-183x"] {
            assert!(Issn::parse(s).is_ok(), "{s}");
        }
        assert_eq!(Issn::parse("0732-183x").unwrap().as_str(), "0732-183X");
    }

    #[test]
    fn bad_check_character() {
        assert_eq!(
            Issn::parse("1234-5678"),
            Err(IssnError::CheckDigit("1234-5678".into(), '9'))
        );
        assert!(Issn::looks_like("1234-5678"));
    }

    #[test]
    fn bad_shape() {
        for s in ["", "12345679", "1234-567", "123-45679", "abcd-efgh", "1234-567Y"] {
            assert!(matches!(Issn::parse(s), Err(IssnError::Format(_))), "{s}");
            assert!(!Issn::looks_like(s));
        }
    }
}
