use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bfi::BfiLevel;
use crate::method::MethodRank;

/// The aggregate Scientific Evidence Level of a source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceLevel {
    Low,
    Medium,
    High,
}

impl EvidenceLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            EvidenceLevel::Low => "low",
            EvidenceLevel::Medium => "medium",
            EvidenceLevel::High => "high",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EvidenceLevel::Low => "Low",
            EvidenceLevel::Medium => "Medium",
            EvidenceLevel::High => "High",
        }
    }
}

impl fmt::Display for EvidenceLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Team h-index a source must strictly exceed to be rated High.
pub const HIGH_MIN_EXCLUSIVE_H: u32 = 20;

/// Aggregates the three scored variables.
///
/// * Low: the channel is not in the BFI system (level 0).
/// * High: BFI level 2 or 3, a top-two method, and a team h-index above 20.
/// * Medium: everything else.
pub fn aggregate_evidence(bfi: BfiLevel, method: MethodRank, team_max_h: u32) -> EvidenceLevel {
    if bfi.is_unreviewed() {
        EvidenceLevel::Low
    } else if bfi.value() >= 2 && method.is_top_two() && team_max_h > HIGH_MIN_EXCLUSIVE_H {
        EvidenceLevel::High
    } else {
        EvidenceLevel::Medium
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn agg(bfi: i64, rank: i64, h: u32) -> EvidenceLevel {
        aggregate_evidence(BfiLevel::new(bfi).unwrap(), MethodRank::new(rank).unwrap(), h)
    }

    #[test]
    fn worked_examples() {
        assert_eq!(agg(0, 1, 80), EvidenceLevel::Low);
        assert_eq!(agg(3, 1, 61), EvidenceLevel::High);
        assert_eq!(agg(1, 1, 100), EvidenceLevel::Medium);
        assert_eq!(agg(2, 2, 20), EvidenceLevel::Medium);
        assert_eq!(agg(2, 2, 21), EvidenceLevel::High);
        assert_eq!(agg(2, 3, 99), EvidenceLevel::Medium);
    }

    #[test]
    fn wire_names() {
        assert_eq!(serde_json::to_string(&EvidenceLevel::High).unwrap(), "\"high\"");
        assert!(EvidenceLevel::Low < EvidenceLevel::Medium && EvidenceLevel::Medium < EvidenceLevel::High);
    }
}
