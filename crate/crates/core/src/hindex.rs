use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Largest `h` such that at least `h` of the papers have `h` or more citations.
///
/// Runs in linear time: counts above `len` are clamped into one bucket since
/// `h` can never exceed the number of papers.
pub fn h_index(citations: &[u64]) -> u32 {
    let n = citations.len();
    let mut buckets = vec![0usize; n + 1];
    for &c in citations {
        let slot = usize::try_from(c).map_or(n, |c| c.min(n));
        buckets[slot] += 1;
    }
    let mut at_least = 0usize;
    for h in (0..=n).rev() {
        at_least += buckets[h];
        if at_least >= h {
            return h as u32;
        }
    }
    0
}

/// [`h_index`] over raw, possibly negative, counts.
pub fn compute_h_index(citations: &[i64]) -> Result<u32, CoreError> {
    let counts = to_counts(citations)?;
    Ok(h_index(&counts))
}

fn to_counts(citations: &[i64]) -> Result<Vec<u64>, CoreError> {
    citations
        .iter()
        .enumerate()
        .map(|(index, &value)| {
            u64::try_from(value).map_err(|_| CoreError::NegativeCitation { index, value })
        })
        .collect()
}

/// Per-author citation data behind the experience variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ProfileRepr")]
pub struct CitationProfile {
    author_name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    citations: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    precomputed_h: Option<u32>,
}

#[derive(Deserialize)]
struct ProfileRepr {
    author_name: String,
    #[serde(default)]
    citations: Option<Vec<u64>>,
    #[serde(default)]
    precomputed_h: Option<u32>,
}

impl TryFrom<ProfileRepr> for CitationProfile {
    type Error = CoreError;

    fn try_from(r: ProfileRepr) -> Result<Self, Self::Error> {
        CitationProfile::new(r.author_name, r.citations, r.precomputed_h)
    }
}

impl CitationProfile {
    /// Rejects a profile whose stated h-index disagrees with its citation counts.
    pub fn new(
        author_name: impl Into<String>,
        citations: Option<Vec<u64>>,
        precomputed_h: Option<u32>,
    ) -> Result<Self, CoreError> {
        let author_name = author_name.into();
        if let (Some(counts), Some(stated)) = (&citations, precomputed_h) {
            let computed = h_index(counts);
            if computed != stated {
                return Err(CoreError::PrecomputedHMismatch {
                    name: author_name,
                    stated,
                    computed,
                });
            }
        }
        Ok(Self {
            author_name,
            citations,
            precomputed_h,
        })
    }

    pub fn from_citations(author_name: impl Into<String>, citations: Vec<u64>) -> Self {
        Self {
            author_name: author_name.into(),
            citations: Some(citations),
            precomputed_h: None,
        }
    }

    pub fn from_h(author_name: impl Into<String>, h: u32) -> Self {
        Self {
            author_name: author_name.into(),
            citations: None,
            precomputed_h: Some(h),
        }
    }

    pub fn author_name(&self) -> &str {
        &self.author_name
    }

    pub fn citations(&self) -> Option<&[u64]> {
        self.citations.as_deref()
    }

    pub fn precomputed_h(&self) -> Option<u32> {
        self.precomputed_h
    }

    /// The precomputed value when present, else the h-index of the citations.
    pub fn h_index(&self) -> Result<u32, CoreError> {
        match (self.precomputed_h, &self.citations) {
            (Some(h), _) => Ok(h),
            (None, Some(counts)) => Ok(h_index(counts)),
            (None, None) => Err(CoreError::ProfileWithoutData(self.author_name.clone())),
        }
    }
}

/// The h-index of the highest ranked author of a team.
pub fn team_max_h(profiles: &[CitationProfile]) -> Result<u32, CoreError> {
    if profiles.is_empty() {
        return Err(CoreError::EmptyAuthorList);
    }
    profiles
        .iter()
        .try_fold(0u32, |best, p| p.h_index().map(|h| best.max(h)))
}
