//! Registry of publication channels and their BFI levels.
//!
//! Channels are looked up by ISSN or by normalized name. A channel that is
//! not in the registry scores BFI level 0.

mod issn;
mod normalize;
mod registry;

pub use issn::{Issn, IssnError};
pub use normalize::normalize_channel_name;
pub use registry::{
    demo_registry, load_registry, lookup_channel, ChannelQuery, ChannelRecord, Diagnostic,
    DiagnosticKind, LoadError, Lookup, LookupError, Registry, DEMO_REGISTRY_CSV, HEADER,
};
