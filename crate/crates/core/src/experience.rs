use std::fmt;

use serde::{Deserialize, Serialize};

/// Experience of an author team, derived from its largest h-index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperienceLevel {
    LessExperienced,
    Experienced,
    VeryExperienced,
    Excellent,
}

impl ExperienceLevel {
    pub fn label(self) -> &'static str {
        match self {
            ExperienceLevel::LessExperienced => "Less Experienced",
            ExperienceLevel::Experienced => "Experienced",
            ExperienceLevel::VeryExperienced => "Very Experienced",
            ExperienceLevel::Excellent => "Excellent",
        }
    }
}

impl fmt::Display for ExperienceLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Maps an h-index onto the four-level scale. Intervals are closed on the
/// lower bound: `[0,20)`, `[20,40)`, `[40,60)`, `[60,∞)`.
pub fn classify_experience(h: u32) -> ExperienceLevel {
    match h {
        0..=19 => ExperienceLevel::LessExperienced,
        20..=39 => ExperienceLevel::Experienced,
        40..=59 => ExperienceLevel::VeryExperienced,
        _ => ExperienceLevel::Excellent,
    }
}
