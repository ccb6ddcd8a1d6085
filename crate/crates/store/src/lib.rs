//! Append-only, versioned persistence of source assessments.
//!
//! The store is a single UTF-8 file with one canonical JSON record per
//! line. Every put appends a new line; nothing is ever rewritten except a
//! torn trailing line left by a crash, which is cut off on open. The
//! in-memory index is rebuilt by replaying the file.

mod error;
mod record;
mod state;
mod store;

pub use error::StoreError;
pub use record::{ArticleMeta, ArticleRef, LogRecord, StoredAssessment, VersionRef};
pub use state::StoreState;
pub use store::{ArticleAttach, OpenReport, PutOptions, Store, StoreOptions};
