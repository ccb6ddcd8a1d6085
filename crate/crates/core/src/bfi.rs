use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Level of a publication channel in the Danish Bibliometric Research
/// Indicator. `0` means the channel is below the BFI minimum standard or not
/// listed at all; `1..=3` is the channel's BFI score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct BfiLevel(u8);

impl BfiLevel {
    pub const UNLISTED: BfiLevel = BfiLevel(0);
    pub const MAX: u8 = 3;

    pub fn new(value: i64) -> Result<Self, CoreError> {
        if (0..=Self::MAX as i64).contains(&value) {
            Ok(BfiLevel(value as u8))
        } else {
            Err(CoreError::InvalidBfiLevel(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// True for level 0, i.e. the source is not peer reviewed per the BFI standard.
    pub fn is_unreviewed(self) -> bool {
        self.0 == 0
    }

    pub fn all() -> impl Iterator<Item = BfiLevel> {
        (0..=Self::MAX).map(BfiLevel)
    }
}

impl TryFrom<i64> for BfiLevel {
    type Error = CoreError;

    fn try_from(value: i64) -> Result<Self, Self::Error> {
        BfiLevel::new(value)
    }
}

impl From<BfiLevel> for u8 {
    fn from(level: BfiLevel) -> u8 {
        level.0
    }
}

impl fmt::Display for BfiLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
