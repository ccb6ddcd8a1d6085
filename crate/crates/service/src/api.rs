use std::collections::HashMap;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use sei_core::{AssessmentId, EvidenceLevel, ExperienceLevel, ValidationErrors};
use sei_gateway::{assess_entry, draft_assessment_from_doi, GatewayError, ManualEntry};
use sei_store::{ArticleAttach, PutOptions, StoreError};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::payload::{render_compact, render_expanded};
use crate::state::AppState;

/// One error in an error response. `code` is stable and machine-readable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorItem {
    pub code: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub errors: Vec<ErrorItem>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    errors: Vec<ErrorItem>,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            errors: vec![ErrorItem {
                code: code.into(),
                field: None,
                message: message.into(),
            }],
        }
    }

    fn bad_request(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, message)
    }

    fn not_found(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, code, message)
    }
}

impl From<ValidationErrors> for ApiError {
    fn from(v: ValidationErrors) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            errors: v
                .iter()
                .map(|i| ErrorItem {
                    code: i.code.as_str().to_owned(),
                    field: Some(i.field.clone()),
                    message: i.message.clone(),
                })
                .collect(),
        }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::VersionConflict { .. } => {
                Self::new(StatusCode::CONFLICT, "VERSION_CONFLICT", e.to_string())
            }
            StoreError::NotFound { .. } => Self::not_found("ASSESSMENT_NOT_FOUND", e.to_string()),
            other => {
                tracing::error!(error = %other, "store failure");
                Self::new(StatusCode::INTERNAL_SERVER_ERROR, "STORAGE_ERROR", other.to_string())
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(ErrorBody { errors: self.errors })).into_response()
    }
}

/// Body of `POST /assessments`: the entered variables plus where to file them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssessmentRequest {
    #[serde(flatten)]
    pub entry: ManualEntry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub article_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub article_title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub article_url: Option<String>,
    /// Set to re-assess an existing source.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<AssessmentId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_version: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Created {
    pub id: AssessmentId,
    pub version: u32,
    pub evidence: EvidenceLevel,
    pub experience: ExperienceLevel,
    pub team_max_h: u32,
    pub article_id: Option<String>,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/assessments", post(post_assessment))
        .route("/assessments/draft-from-doi", post(draft_from_doi))
        .route("/assessments/{id}", get(get_assessment))
        .route("/assessments/{id}/versions", get(get_versions))
        .route("/articles/{article_id}/indicators", get(indicators))
        .route("/registry/channels", get(channels))
        .route("/registry/reload", post(reload_registry))
        .fallback(|| async { ApiError::not_found("NO_SUCH_ROUTE", "no such endpoint") })
        .with_state(state)
}

fn parse_json<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request("MALFORMED_BODY", e.to_string()))
}

async fn post_assessment(
    State(state): State<AppState>,
    body: Bytes,
) -> Result<(StatusCode, HeaderMap, Json<Created>), ApiError> {
    let req: AssessmentRequest = parse_json(&body)?;
    if req.article_id.is_none() && (req.article_title.is_some() || req.article_url.is_some()) {
        return Err(ApiError::bad_request(
            "MALFORMED_BODY",
            "article_title and article_url need an article_id",
        ));
    }
    let assessment = assess_entry(&req.entry, &state.registry())?;
    let opts = PutOptions {
        id: req.id,
        expected_version: req.expected_version,
        article: req.article_id.map(|article_id| ArticleAttach {
            article_id,
            title: req.article_title,
            url: req.article_url,
        }),
        created_at: None,
    };
    let writer = state.clone();
    let stored = tokio::task::spawn_blocking(move || writer.store_mut().put(assessment, opts))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "STORAGE_ERROR", e.to_string()))??;

    let a = &stored.assessment;
    let mut headers = HeaderMap::new();
    if let Ok(loc) = HeaderValue::from_str(&format!("/assessments/{}?version={}", a.id, a.version)) {
        headers.insert(header::LOCATION, loc);
    }
    Ok((
        StatusCode::CREATED,
        headers,
        Json(Created {
            id: a.id,
            version: a.version,
            evidence: a.assessment.evidence(),
            experience: a.assessment.experience(),
            team_max_h: a.assessment.team_max_h(),
            article_id: stored.article_id.clone(),
        }),
    ))
}

#[derive(Deserialize)]
struct DraftRequest {
    doi: String,
}

async fn draft_from_doi(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: DraftRequest = parse_json(&body)?;
    let provider = state.provider().ok_or_else(|| {
        ApiError::new(
            StatusCode::SERVICE_UNAVAILABLE,
            "PROVIDER_NOT_CONFIGURED",
            "no metadata provider is configured",
        )
    })?;
    let registry = state.registry();
    match draft_assessment_from_doi(provider.as_ref(), &registry, &req.doi).await {
        Ok(outcome) => Ok(Json(outcome).into_response()),
        Err(e @ GatewayError::InvalidDoi(_)) => Err(ApiError::bad_request("INVALID_DOI", e.to_string())),
        Err(e @ GatewayError::NotFound(_)) => Err(ApiError::not_found("DOI_NOT_FOUND", e.to_string())),
        Err(e @ GatewayError::Config(_)) => Err(ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "PROVIDER_MISCONFIGURED",
            e.to_string(),
        )),
        Err(e) => Err(ApiError::new(StatusCode::BAD_GATEWAY, "UPSTREAM_FAILURE", e.to_string())),
    }
}

fn parse_id(raw: &str) -> Result<AssessmentId, ApiError> {
    raw.parse()
        .map_err(|_| ApiError::not_found("ASSESSMENT_NOT_FOUND", format!("assessment {raw} not found")))
}

async fn get_assessment(
    State(state): State<AppState>,
    Path(raw): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let id = parse_id(&raw)?;
    let version = match q.get("version") {
        None => None,
        Some(v) => Some(v.parse::<u32>().map_err(|_| {
            ApiError::bad_request("INVALID_VERSION", format!("version must be a positive integer, got `{v}`"))
        })?),
    };
    let store = state.store();
    Ok(Json(store.get(id, version)?).into_response())
}

async fn get_versions(State(state): State<AppState>, Path(raw): Path<String>) -> Result<Response, ApiError> {
    let id = parse_id(&raw)?;
    let store = state.store();
    match store.state().history(id) {
        [] => Err(StoreError::NotFound { id, version: None }.into()),
        history => Ok(Json(history).into_response()),
    }
}

async fn indicators(
    State(state): State<AppState>,
    Path(article_id): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let expanded = match q.get("view").map(String::as_str) {
        None | Some("compact") => false,
        Some("expanded") => true,
        Some(other) => {
            return Err(ApiError::bad_request(
                "INVALID_VIEW",
                format!("view must be compact or expanded, got `{other}`"),
            ))
        }
    };
    let store = state.store();
    let heads = store.list_by_article(&article_id);
    let body = if expanded {
        let list: Vec<_> = heads
            .into_iter()
            .map(|s| render_expanded(s, state.copy(), state.links()))
            .collect();
        serde_json::to_vec(&list)
    } else {
        let list: Vec<_> = heads.into_iter().map(|s| render_compact(s, state.copy())).collect();
        serde_json::to_vec(&list)
    }
    .expect("payloads serialize");
    Ok(([(header::CONTENT_TYPE, "application/json")], body).into_response())
}

async fn channels(
    State(state): State<AppState>,
    Query(q): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let limit = match q.get("limit") {
        None => 20,
        Some(v) => v
            .parse::<usize>()
            .ok()
            .filter(|n| (1..=200).contains(n))
            .ok_or_else(|| ApiError::bad_request("INVALID_LIMIT", "limit must be between 1 and 200"))?,
    };
    let query = q.get("q").map_or("", String::as_str);
    let registry = state.registry();
    Ok(Json(registry.search(query, limit)).into_response())
}

async fn reload_registry(State(state): State<AppState>) -> Result<Response, ApiError> {
    if !state.has_registry_file() {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "NO_REGISTRY_FILE",
            "the service runs on the bundled demo registry",
        ));
    }
    let writer = state.clone();
    match tokio::task::spawn_blocking(move || writer.reload_registry()).await {
        Ok(Ok(r)) => Ok(Json(json!({"channels": r.len(), "source_version": r.source_version()})).into_response()),
        Ok(Err(e)) => Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "REGISTRY_INVALID", e.to_string())),
        Err(e) => Err(ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "REGISTRY_INVALID", e.to_string())),
    }
}

async fn healthz(State(state): State<AppState>) -> Json<serde_json::Value> {
    let registry = state.registry();
    let (records, assessments) = {
        let store = state.store();
        (store.state().record_count(), store.state().ids().len())
    };
    let provider = match state.provider() {
        Some(p) => json!({"status": "ok", "description": p.describe()}),
        None => json!({"status": "not_configured"}),
    };
    Json(json!({
        "status": "ok",
        "components": {
            "registry": {
                "status": "ok",
                "channels": registry.len(),
                "source_version": registry.source_version(),
            },
            "store": {"status": "ok", "records": records, "assessments": assessments},
            "provider": provider,
            "locale": state.copy().locale(),
        }
    }))
}
