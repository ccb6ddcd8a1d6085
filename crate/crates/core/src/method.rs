use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

const LABELS: [&str; 7] = [
    "Systematic review / meta-analysis",
    "Randomized controlled trial",
    "Cohort study",
    "Case-control study",
    "Cross-sectional study",
    "Case series / case report",
    "Expert opinion / in-vitro / animal study",
];

/// Position of a study design in the 7-level medical evidence hierarchy.
/// Rank 1 is the strongest evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct MethodRank(u8);

impl MethodRank {
    pub const STRONGEST: MethodRank = MethodRank(1);
    pub const WEAKEST: MethodRank = MethodRank(7);

    pub fn new(rank: i64) -> Result<Self, CoreError> {
        if (1..=7).contains(&rank) {
            Ok(MethodRank(rank as u8))
        } else {
            Err(CoreError::InvalidMethodRank(rank))
        }
    }

    pub fn rank(self) -> u8 {
        self.0
    }

    pub fn label(self) -> &'static str {
        LABELS[self.0 as usize - 1]
    }

    /// One of the two top levels of the hierarchy.
    pub fn is_top_two(self) -> bool {
        self.0 <= 2
    }

    /// Strongest first.
    pub fn all() -> impl Iterator<Item = MethodRank> {
        (1..=7).map(MethodRank)
    }
}

impl TryFrom<i64> for MethodRank {
    type Error = CoreError;

    fn try_from(value: i64) -> Result<Self, Self::Error> {
        MethodRank::new(value)
    }
}

impl From<MethodRank> for u8 {
    fn from(rank: MethodRank) -> u8 {
        rank.0
    }
}

impl fmt::Display for MethodRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}/7)", self.label(), self.0)
    }
}
