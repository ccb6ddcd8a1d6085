//! User-facing strings, keyed by stable identifiers.
//!
//! Only English ships built in. A deployment can replace any entry through
//! the `strings` table of the config file, which is also how a translation
//! is supplied.

use std::collections::HashMap;

const ENGLISH: &[(&str, &str)] = &[
    ("label.publication", "Scientific publication"),
    ("label.method", "Method"),
    ("label.experience", "Researcher's Experience"),
    ("label.remarks", "Special Remarks"),
    ("evidence.low", "Low"),
    ("evidence.medium", "Medium"),
    ("evidence.high", "High"),
    ("evidence.explain.low", "The source is not in the BFI system."),
    (
        "evidence.explain.medium",
        "The source is published at BFI level 1 or higher but does not meet every criterion for High.",
    ),
    (
        "evidence.explain.high",
        "The source is published at BFI level 2 or 3, uses one of the two strongest study designs, and at least one author has an h-index above 20.",
    ),
    ("value.publication.level", "BFI level {level}"),
    ("value.publication.unlisted", "Not in the BFI register"),
    ("value.publication.below_minimum", "Below the BFI minimum standard"),
    ("value.method", "{label} (level {rank} of 7)"),
    ("value.experience", "{label} (h-index {h})"),
    ("value.remarks.none", "None"),
    ("value.remarks.count", "{count} remarks"),
    ("method.1", "Systematic review / meta-analysis"),
    ("method.2", "Randomized controlled trial"),
    ("method.3", "Cohort study"),
    ("method.4", "Case-control study"),
    ("method.5", "Cross-sectional study"),
    ("method.6", "Case series / case report"),
    ("method.7", "Expert opinion / in-vitro / animal study"),
    ("experience.less_experienced", "Less Experienced"),
    ("experience.experienced", "Experienced"),
    ("experience.very_experienced", "Very Experienced"),
    ("experience.excellent", "Excellent"),
    (
        "explain.publication",
        "Whether the study appeared in a peer-reviewed publication channel recognised by the Danish Bibliometric Research Indicator (BFI). Registered channels score 1 to 3; anything below the minimum standard scores 0.",
    ),
    (
        "explain.method",
        "Where the study design sits in a 7-level evidence hierarchy for medical research, from systematic reviews at level 1 to expert opinion and laboratory studies at level 7.",
    ),
    (
        "explain.experience",
        "The highest h-index among the authors: Excellent from 60, Very Experienced from 40, Experienced from 20, otherwise Less Experienced.",
    ),
    (
        "explain.remarks",
        "Notes from the journalist on aspects of the study that matter for how far its conclusions can be trusted. A note is required when the study was not peer reviewed to BFI standard.",
    ),
    (
        "disclaimer",
        "The line between Medium and High is a heuristic for picking out sources of exceptionally high reliability. It does not reflect a scholarly consensus.",
    ),
    ("link.evidence", "How scientists assess evidence"),
    ("link.indicator", "Principles and limitations of this indicator"),
];

#[derive(Debug, Clone)]
pub struct StringTable {
    locale: String,
    entries: HashMap<String, String>,
}

impl StringTable {
    pub fn english() -> Self {
        StringTable {
            locale: "en".into(),
            entries: ENGLISH
                .iter()
                .map(|(k, v)| ((*k).to_owned(), (*v).to_owned()))
                .collect(),
        }
    }

    /// English with the given entries replaced. Unknown keys are rejected
    /// so a typo in a translation file is caught at startup.
    pub fn for_locale(
        locale: &str,
        overrides: &HashMap<String, String>,
    ) -> Result<Self, String> {
        let mut table = Self::english();
        table.locale = locale.to_owned();
        for (k, v) in overrides {
            match table.entries.get_mut(k) {
                Some(slot) => *slot = v.clone(),
                None => return Err(format!("unknown string key `{k}`")),
            }
        }
        Ok(table)
    }

    pub fn locale(&self) -> &str {
        &self.locale
    }

    pub fn get<'a>(&'a self, key: &'a str) -> &'a str {
        self.entries.get(key).map_or(key, String::as_str)
    }

    /// Looks up `key` and replaces each `{name}` with its value.
    pub fn format(&self, key: &str, args: &[(&str, &dyn std::fmt::Display)]) -> String {
        let mut out = self.get(key).to_owned();
        for (name, value) in args {
            out = out.replace(&format!("{{{name}}}"), &value.to_string());
        }
        out
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}
