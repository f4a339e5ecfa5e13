//! JSON API over a loaded engine.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use qa_core::{Engine, EngineError};
use serde::Deserialize;
use serde_json::json;
use tokio::net::TcpListener;
use tower_http::cors::{Any, CorsLayer};

#[derive(Debug, Deserialize)]
struct AskRequest {
    question: String,
    k: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error("port {0} is already in use")]
    PortBusy(u16),
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        #[source]
        source: std::io::Error,
    },
    #[error("server failed: {0}")]
    Serve(#[source] std::io::Error),
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into() }))).into_response()
}

pub fn router(engine: Arc<Engine>) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/api/health", get(health))
        .route("/api/ask", post(ask))
        .route("/api/ontology/stats", get(ontology_stats))
        .layer(cors)
        .with_state(engine)
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

async fn ontology_stats(State(engine): State<Arc<Engine>>) -> Json<qa_core::ontology::OntologyStats> {
    Json(engine.ontology().stats())
}

// The body is parsed by hand so that every malformed request gets the same
// `{error}` shape.
async fn ask(State(engine): State<Arc<Engine>>, body: Bytes) -> Response {
    if body.iter().all(u8::is_ascii_whitespace) {
        return error(StatusCode::BAD_REQUEST, "request body is empty");
    }
    let request: AskRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, format!("malformed request: {e}")),
    };
    let k = request.k.unwrap_or(engine.config().answer_count);
    if k == 0 {
        return error(StatusCode::BAD_REQUEST, "k must be positive");
    }
    let result = tokio::task::spawn_blocking(move || engine.ask_top(&request.question, k)).await;
    match result {
        Ok(Ok(response)) => Json(response).into_response(),
        Ok(Err(EngineError::InvalidQuestion)) => error(StatusCode::BAD_REQUEST, "question is empty"),
        Ok(Err(e)) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

pub async fn bind(addr: SocketAddr) -> Result<TcpListener, ServeError> {
    TcpListener::bind(addr).await.map_err(|source| match source.kind() {
        std::io::ErrorKind::AddrInUse => ServeError::PortBusy(addr.port()),
        _ => ServeError::Bind { addr, source },
    })
}

/// Serve until Ctrl-C.
pub async fn serve(engine: Arc<Engine>, listener: TcpListener) -> Result<(), ServeError> {
    axum::serve(listener, router(engine))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(ServeError::Serve)
}
