//! HTTP service for the Science Evidence Indicator.
//!
//! Journalists submit the four variables per source (or ask for an
//! automated draft from a DOI); readers fetch indicator payloads per
//! article. Shared state is the registry, which can be swapped atomically
//! on reload, and the single-writer assessment store.

pub mod api;
pub mod config;
pub mod copy;
pub mod payload;
pub mod state;

pub use api::{router, AssessmentRequest, Created, ErrorBody, ErrorItem};
pub use config::{ConfigError, ServiceConfig};
pub use copy::StringTable;
pub use payload::{
    render_compact, render_expanded, CompactPayload, ExpandedPayload, LinkSlot, RemarkView,
    VariableExplanation, VariableKey, VariableSummary, VariableValues,
};
pub use state::{AppState, StartupError};

/// Serves `state` on `listener` until `shutdown` resolves.
pub async fn serve(
    listener: tokio::net::TcpListener,
    state: AppState,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await
}
