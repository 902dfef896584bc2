//! Local JSON-over-HTTP service used by the browser UI and by scripts.
//!
//! Sessions live in memory. Requests can be appended to a JSON-lines log,
//! and [`replay`] feeds such a log to a fresh service. Session ids are
//! sequential and no response carries a timestamp, so a replay reproduces
//! every game response byte for byte.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::SystemTime;

use axum::body::{Body, Bytes};
use axum::extract::{Path as UrlPath, Query, Request, State};
use axum::http::{header, Method, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower::ServiceExt;

use crossout::identities::{run_suites, Suite};
use crossout::{
    crossout_mark, decode, encode, new_game, stat_bundle, CrossoutTuple, Error, GameSetup, GameState, Permutation,
    Player,
};

pub struct SessionRecord {
    pub id: String,
    pub state: GameState,
    pub seed: Option<u64>,
    pub created: SystemTime,
    pub updated: SystemTime,
}

#[derive(Default)]
pub struct AppState {
    sessions: RwLock<HashMap<String, Arc<Mutex<SessionRecord>>>>,
    next_id: AtomicU64,
    log: Option<Mutex<std::fs::File>>,
}

impl AppState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends every request to `path` as one JSON line.
    pub fn with_log(path: &Path) -> std::io::Result<Self> {
        let file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        Ok(AppState { log: Some(Mutex::new(file)), ..Self::default() })
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<SessionRecord>>, ApiError> {
        self.sessions
            .read()
            .expect("session map poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "unknown session"))
    }
}

pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError { status, message: message.into() }
    }

    fn unprocessable(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::IllegalMove(msg) => ApiError::new(StatusCode::CONFLICT, msg),
            Error::State(msg) => ApiError::new(StatusCode::CONFLICT, msg),
            other => ApiError::unprocessable(other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    let body: &[u8] = if body.is_empty() { b"{}" } else { body };
    serde_json::from_slice(body).map_err(|e| ApiError::unprocessable(format!("invalid body: {e}")))
}

// ---------------------------------------------------------------------------
// state views

#[derive(Serialize)]
struct PartialPaths {
    /// Values eaten by Alice so far, ascending.
    pa_down: Vec<usize>,
    /// Positions eaten by Bob so far, shifted by one, ascending.
    pb_down: Vec<usize>,
}

fn state_view(state: &GameState) -> Value {
    let mut pa_down: Vec<usize> = state.eaten_by(Player::Alice).iter().map(|&p| state.w().get(p)).collect();
    pa_down.sort_unstable();
    let mut pb_down: Vec<usize> = state.eaten_by(Player::Bob).iter().map(|&p| p + 1).collect();
    pb_down.sort_unstable();
    let mut view = serde_json::to_value(state).expect("state serializes");
    view["partial_paths"] = serde_json::to_value(PartialPaths { pa_down, pb_down }).expect("paths serialize");
    if state.is_over() {
        let marking = crossout_mark(state.w());
        let optimal = state.history().iter().all(|m| m.player.mark() == marking.mark_at(m.position));
        view["final"] = json!({
            "optimal_allocation": optimal,
            "tuple": encode(state.w()),
            "stats": stat_bundle(state.w()),
            "no_trade": state.no_trade_check().expect("game is over"),
        });
    }
    view
}

fn session_view(record: &SessionRecord) -> Value {
    json!({ "session": record.id, "state": state_view(&record.state) })
}

// ---------------------------------------------------------------------------
// handlers

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NewGame {
    /// Number of morsels for a random game.
    #[serde(alias = "size")]
    n: Option<usize>,
    w: Option<Permutation>,
    human_role: Option<Player>,
    seed: Option<u64>,
    auto: Option<bool>,
}

fn advance_engine(state: &mut GameState) -> ApiResult<()> {
    if state.human_role().is_none() {
        return Ok(());
    }
    while state.is_engine_turn() {
        let pos = state.engine_move()?;
        *state = state.apply_move(pos)?;
    }
    Ok(())
}

async fn create_game(State(app): State<Arc<AppState>>, body: Bytes) -> ApiResult<(StatusCode, Json<Value>)> {
    let req: NewGame = parse_body(&body)?;
    let seed = req.seed.unwrap_or(0);
    let setup = match (req.w, req.n) {
        (Some(w), None) => GameSetup::Permutation(w),
        (None, Some(size)) => GameSetup::Random { size, seed },
        _ => return Err(ApiError::unprocessable("give exactly one of n or w")),
    };
    let seed = matches!(setup, GameSetup::Random { .. }).then_some(seed);
    let mut state = new_game(setup, req.human_role)?;
    if req.auto.unwrap_or(true) {
        advance_engine(&mut state)?;
    }
    let id = format!("g{}", app.next_id.fetch_add(1, Ordering::SeqCst) + 1);
    let now = SystemTime::now();
    let record = SessionRecord { id: id.clone(), state, seed, created: now, updated: now };
    let view = session_view(&record);
    app.sessions.write().expect("session map poisoned").insert(id, Arc::new(Mutex::new(record)));
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_game(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let session = app.session(&id)?;
    let record = session.lock().expect("session poisoned");
    Ok(Json(session_view(&record)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveRequest {
    position: Option<usize>,
    auto: Option<bool>,
}

async fn post_move(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let session = app.session(&id)?;
    let req: MoveRequest = parse_body(&body)?;
    let mut record = session.lock().expect("session poisoned");
    let state = &record.state;
    let turn = state.turn().ok_or_else(|| ApiError::new(StatusCode::CONFLICT, "game over"))?;
    let mut next = match req.position {
        Some(pos) => {
            if state.human_role().is_some_and(|h| h != turn) {
                return Err(ApiError::new(StatusCode::CONFLICT, "not your turn"));
            }
            state.apply_move(pos)?
        }
        None => state.apply_move(state.engine_move()?)?,
    };
    if req.auto.unwrap_or(true) {
        advance_engine(&mut next)?;
    }
    record.state = next;
    record.updated = SystemTime::now();
    Ok(Json(session_view(&record)))
}

async fn get_analysis(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let session = app.session(&id)?;
    let record = session.lock().expect("session poisoned");
    let state = &record.state;
    let w = state.w();
    let allocation: Vec<Value> = state
        .analysis()
        .into_iter()
        .map(|(pos, p)| json!({ "position": pos, "value": w.get(pos), "player": p }))
        .collect();
    let offset = state.history().len();
    let predicted: Vec<Value> = state
        .predicted_moves()
        .into_iter()
        .enumerate()
        .map(|(i, (p, pos))| json!({ "move": offset + i + 1, "player": p, "position": pos, "value": w.get(pos) }))
        .collect();
    Ok(Json(json!({ "session": record.id, "turn": state.turn(), "allocation": allocation, "predicted": predicted })))
}

#[derive(Deserialize)]
struct EncodeRequest {
    w: Permutation,
}

async fn post_encode(body: Bytes) -> ApiResult<Json<CrossoutTuple>> {
    let req: EncodeRequest = parse_body(&body)?;
    Ok(Json(encode(&req.w)))
}

#[derive(Deserialize)]
struct DecodeRequest {
    tuple: Value,
}

async fn post_decode(body: Bytes) -> ApiResult<Json<Value>> {
    let req: DecodeRequest = parse_body(&body)?;
    let tuple: CrossoutTuple =
        serde_json::from_value(req.tuple).map_err(|e| ApiError::unprocessable(format!("invalid tuple: {e}")))?;
    let w = decode(&tuple)?;
    Ok(Json(json!({ "w": w })))
}

#[derive(Deserialize)]
struct IdentityQuery {
    suite: String,
    n: usize,
}

async fn get_identities(Query(q): Query<IdentityQuery>) -> ApiResult<Response> {
    let suites = Suite::parse_list(&q.suite)?;
    let body = tokio::task::spawn_blocking(move || -> Result<String, Error> {
        let mut out = String::new();
        run_suites(&suites, q.n, false, &mut |r| {
            out.push_str(&serde_json::to_string(&r).expect("report serializes"));
            out.push('\n');
        })?;
        Ok(out)
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], body).into_response())
}

// ---------------------------------------------------------------------------
// logging and replay

#[derive(Serialize, Deserialize)]
pub struct LoggedRequest {
    pub method: String,
    pub path: String,
    #[serde(default)]
    pub body: String,
}

async fn log_requests(State(app): State<Arc<AppState>>, req: Request, next: Next) -> Response {
    let Some(log) = app.log.as_ref() else {
        return next.run(req).await;
    };
    let (parts, body) = req.into_parts();
    let bytes = match axum::body::to_bytes(body, usize::MAX).await {
        Ok(b) => b,
        Err(e) => return ApiError::unprocessable(e.to_string()).into_response(),
    };
    let entry = LoggedRequest {
        method: parts.method.to_string(),
        path: parts.uri.path_and_query().map(|p| p.to_string()).unwrap_or_default(),
        body: String::from_utf8_lossy(&bytes).into_owned(),
    };
    if let Ok(mut file) = log.lock() {
        let _ = writeln!(file, "{}", serde_json::to_string(&entry).expect("log entry serializes"));
    }
    next.run(Request::from_parts(parts, Body::from(bytes))).await
}

pub fn router(app: Arc<AppState>) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/moves", post(post_move))
        .route("/games/{id}/analysis", get(get_analysis))
        .route("/encode", post(post_encode))
        .route("/decode", post(post_decode))
        .route("/identities", get(get_identities))
        .layer(middleware::from_fn_with_state(app.clone(), log_requests))
        .with_state(app)
}

/// Feeds logged requests to a fresh service, returning `(status, body)` per
/// request in order.
pub async fn replay(requests: &[LoggedRequest]) -> anyhow::Result<Vec<(u16, String)>> {
    let app = router(Arc::new(AppState::new()));
    let mut out = Vec::with_capacity(requests.len());
    for entry in requests {
        let method: Method = entry.method.parse()?;
        let req = Request::builder()
            .method(method)
            .uri(&entry.path)
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(entry.body.clone()))?;
        let resp = app.clone().oneshot(req).await?;
        let status = resp.status().as_u16();
        let bytes = axum::body::to_bytes(resp.into_body(), usize::MAX).await?;
        out.push((status, String::from_utf8_lossy(&bytes).into_owned()));
    }
    Ok(out)
}

pub fn read_log(path: &Path) -> anyhow::Result<Vec<LoggedRequest>> {
    let text = std::fs::read_to_string(path)?;
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| Ok(serde_json::from_str(l)?)).collect()
}

/// Binds to `addr` (loopback unless told otherwise) and serves until killed.
pub async fn serve(addr: std::net::SocketAddr, app: Arc<AppState>) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("crossout service listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(app)).await?;
    Ok(())
}
