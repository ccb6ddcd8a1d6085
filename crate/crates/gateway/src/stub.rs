//! A local HTTP server that serves a fixture directory with the document
//! shapes [`HttpProvider`](crate::HttpProvider) expects. Fixture files are
//! returned byte-for-byte.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::Deserialize;
use tokio::net::TcpListener;
use tokio::task::JoinHandle;

use crate::error::GatewayError;
use crate::fixture::FixtureProvider;
use crate::record::Doi;

#[derive(Debug, Clone, Default)]
pub struct StubOptions {
    /// Answer this many requests with 503 before serving normally.
    pub fail_first: usize,
}

struct StubState {
    fixtures: FixtureProvider,
    fail_first: usize,
    requests: AtomicUsize,
}

pub struct StubServer {
    addr: SocketAddr,
    state: Arc<StubState>,
    task: JoinHandle<()>,
}

impl StubServer {
    pub fn base_url(&self) -> String {
        format!("http://{}", self.addr)
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// Requests received so far, including injected failures.
    pub fn requests(&self) -> usize {
        self.state.requests.load(Ordering::SeqCst)
    }

    pub fn shutdown(self) {
        self.task.abort();
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.task.abort();
    }
}

pub fn router(root: impl Into<PathBuf>, options: StubOptions) -> Router {
    router_with_state(Arc::new(StubState {
        fixtures: FixtureProvider::new(root),
        fail_first: options.fail_first,
        requests: AtomicUsize::new(0),
    }))
}

fn router_with_state(state: Arc<StubState>) -> Router {
    Router::new()
        .route("/works/{doi}", get(work))
        .route("/authors/{id}", get(author))
        .route("/authors", get(author_search))
        .with_state(state)
}

/// Binds an ephemeral local port and serves `root` on it.
pub async fn spawn(root: impl Into<PathBuf>, options: StubOptions) -> std::io::Result<StubServer> {
    let listener = TcpListener::bind(("127.0.0.1", 0)).await?;
    let addr = listener.local_addr()?;
    let state = Arc::new(StubState {
        fixtures: FixtureProvider::new(root),
        fail_first: options.fail_first,
        requests: AtomicUsize::new(0),
    });
    let app = router_with_state(state.clone());
    let task = tokio::spawn(async move {
        if let Err(e) = axum::serve(listener, app).await {
            tracing::error!(error = %e, "stub server stopped");
        }
    });
    Ok(StubServer { addr, state, task })
}

fn injected_failure(state: &StubState) -> Option<Response> {
    let n = state.requests.fetch_add(1, Ordering::SeqCst);
    (n < state.fail_first).then(|| (StatusCode::SERVICE_UNAVAILABLE, "injected failure").into_response())
}

fn json_bytes(bytes: Vec<u8>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], bytes).into_response()
}

fn error_response(e: GatewayError) -> Response {
    let status = match e {
        GatewayError::NotFound(_) => StatusCode::NOT_FOUND,
        GatewayError::InvalidDoi(_) => StatusCode::BAD_REQUEST,
        _ => StatusCode::INTERNAL_SERVER_ERROR,
    };
    (status, Json(serde_json::json!({ "error": e.to_string() }))).into_response()
}

async fn work(State(state): State<Arc<StubState>>, Path(doi): Path<String>) -> Response {
    if let Some(r) = injected_failure(&state) {
        return r;
    }
    let result = async {
        let doi = Doi::parse(&doi)?;
        state.fixtures.publication_bytes(&doi).await
    }
    .await;
    result.map_or_else(error_response, json_bytes)
}

async fn author(State(state): State<Arc<StubState>>, Path(id): Path<String>) -> Response {
    if let Some(r) = injected_failure(&state) {
        return r;
    }
    state
        .fixtures
        .author_bytes(&id)
        .await
        .map_or_else(error_response, json_bytes)
}

#[derive(Deserialize)]
struct NameQuery {
    name: String,
}

async fn author_search(
    State(state): State<Arc<StubState>>,
    Query(q): Query<NameQuery>,
) -> Response {
    if let Some(r) = injected_failure(&state) {
        return r;
    }
    match state.fixtures.search_authors(&q.name).await {
        Ok(docs) => Json(docs).into_response(),
        Err(e) => error_response(e),
    }
}
