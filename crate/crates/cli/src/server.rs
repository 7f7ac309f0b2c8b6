//! HTTP + JSON front end for [`Service`].
//!
//! Every mutation bumps the session's step counter and wakes the event
//! streams of that session, which push a fresh view to their seat.

use std::convert::Infallible;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use deckforge_core::datagen::{write_ndjson, Mode};
use deckforge_core::engine::{Action, EngineError};
use deckforge_core::play::{PlayError, SeatView, Service, Status};
use deckforge_core::script::presets;
use futures::stream::{self, Stream};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::broadcast;

#[derive(Clone)]
pub struct AppState {
    pub service: Arc<Service>,
    /// Ids of sessions that just changed.
    changes: broadcast::Sender<String>,
}

impl AppState {
    pub fn new(service: Service) -> Self {
        Self { service: Arc::new(service), changes: broadcast::channel(256).0 }
    }

    fn touched(&self, id: &str) {
        // Nobody listening is fine.
        let _ = self.changes.send(id.to_string());
    }
}

pub struct ApiError(PlayError);

impl From<PlayError> for ApiError {
    fn from(e: PlayError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, kind) = match &self.0 {
            PlayError::UnknownSession(_) => (StatusCode::NOT_FOUND, "unknown_session"),
            PlayError::Script(_) => (StatusCode::UNPROCESSABLE_ENTITY, "bad_script"),
            PlayError::NoSuchSeat(_) => (StatusCode::BAD_REQUEST, "no_such_seat"),
            PlayError::SeatTaken(_) => (StatusCode::CONFLICT, "seat_taken"),
            PlayError::NotHuman(_) => (StatusCode::FORBIDDEN, "not_human"),
            PlayError::Waiting => (StatusCode::CONFLICT, "waiting"),
            PlayError::Engine(EngineError::NotYourTurn { .. }) => (StatusCode::CONFLICT, "not_your_turn"),
            PlayError::Engine(EngineError::IllegalAction { .. }) => (StatusCode::UNPROCESSABLE_ENTITY, "illegal_action"),
            PlayError::Engine(EngineError::RoundOver) => (StatusCode::CONFLICT, "round_over"),
            PlayError::Engine(_) => (StatusCode::BAD_REQUEST, "engine"),
            PlayError::Storage(_) => (StatusCode::INTERNAL_SERVER_ERROR, "storage"),
        };
        let mut body = json!({ "error": kind, "message": self.0.to_string() });
        if let PlayError::Engine(EngineError::IllegalAction { legal, .. }) = &self.0 {
            body["legal_actions"] = json!(legal.iter().map(ToString::to_string).collect::<Vec<_>>());
        }
        (status, Json(body)).into_response()
    }
}

fn bad_request(message: String) -> Response {
    (StatusCode::BAD_REQUEST, Json(json!({ "error": "bad_request", "message": message }))).into_response()
}

#[derive(Debug, Deserialize)]
pub struct CreateBody {
    pub script: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct Created {
    pub id: String,
    pub seats: usize,
}

#[derive(Debug, Deserialize)]
pub struct SeatBody {
    pub seat: usize,
}

#[derive(Debug, Deserialize)]
pub struct BotBody {
    pub seat: usize,
    pub seed: u64,
}

#[derive(Debug, Deserialize)]
pub struct ActionBody {
    pub seat: usize,
    /// Text form, e.g. `raise 4` or `discard H2 D10`.
    pub action: String,
}

#[derive(Debug, Deserialize)]
pub struct SeatQuery {
    pub seat: usize,
}

#[derive(Debug, Deserialize)]
pub struct LogQuery {
    pub mode: Option<String>,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/presets", get(list_presets))
        .route("/sessions", get(list_sessions).post(create))
        .route("/sessions/{id}/join", post(join))
        .route("/sessions/{id}/bots", post(add_bot))
        .route("/sessions/{id}/view", get(view))
        .route("/sessions/{id}/actions", post(act))
        .route("/sessions/{id}/log", get(log))
        .route("/sessions/{id}/events", get(events))
        .with_state(state)
}

async fn list_presets() -> Json<serde_json::Value> {
    Json(json!(presets::all().map(|p| json!({ "name": p.name, "script": p.text })).collect::<Vec<_>>()))
}

async fn list_sessions(State(st): State<AppState>) -> Json<Vec<String>> {
    Json(st.service.session_ids())
}

async fn create(State(st): State<AppState>, Json(body): Json<CreateBody>) -> Result<Response, ApiError> {
    let id = st.service.create(&body.script, body.seed)?;
    let seats = st.service.session(&id)?.lock().map(|s| s.seats.len()).unwrap_or_default();
    Ok((StatusCode::CREATED, Json(Created { id, seats })).into_response())
}

async fn join(State(st): State<AppState>, Path(id): Path<String>, Json(b): Json<SeatBody>) -> Result<Json<SeatView>, ApiError> {
    let v = st.service.join(&id, b.seat)?;
    st.touched(&id);
    Ok(Json(v))
}

async fn add_bot(State(st): State<AppState>, Path(id): Path<String>, Json(b): Json<BotBody>) -> Result<Json<serde_json::Value>, ApiError> {
    st.service.add_bot(&id, b.seat, b.seed)?;
    st.touched(&id);
    Ok(Json(json!({ "seat": b.seat, "step": st.service.step_count(&id)? })))
}

async fn view(State(st): State<AppState>, Path(id): Path<String>, Query(q): Query<SeatQuery>) -> Result<Json<SeatView>, ApiError> {
    Ok(Json(st.service.view(&id, q.seat)?))
}

async fn act(State(st): State<AppState>, Path(id): Path<String>, Json(b): Json<ActionBody>) -> Response {
    let action: Action = match b.action.parse() {
        Ok(a) => a,
        Err(e) => return bad_request(format!("{e}")),
    };
    match st.service.post_action(&id, b.seat, action) {
        Ok(v) => {
            st.touched(&id);
            Json(v).into_response()
        }
        Err(e) => ApiError(e).into_response(),
    }
}

/// The session's transitions as corpus records, one JSON object per line.
async fn log(State(st): State<AppState>, Path(id): Path<String>, Query(q): Query<LogQuery>) -> Response {
    let mode: Mode = match q.mode.as_deref().unwrap_or("dsp").parse() {
        Ok(m) => m,
        Err(e) => return bad_request(e),
    };
    match st.service.export(&id, mode) {
        Ok(records) => {
            let mut body = Vec::new();
            write_ndjson(&mut body, &records).expect("writing to memory");
            ([(header::CONTENT_TYPE, "application/x-ndjson")], body).into_response()
        }
        Err(e) => ApiError(e).into_response(),
    }
}

/// Server-sent `view` events for one seat: the current view first, then one
/// per change. The stream ends after the finished view.
async fn events(
    State(st): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<SeatQuery>,
) -> Result<Sse<impl Stream<Item = Result<Event, Infallible>>>, ApiError> {
    let rx = st.changes.subscribe();
    let first = st.service.view(&id, q.seat)?;
    let feed = Feed { st, id, seat: q.seat, rx, pending: Some(first), last: None };
    let s = stream::unfold(feed, |mut f| async move {
        let v = f.next_view().await?;
        let ev = Event::default().event("view").json_data(&v).expect("views serialize");
        f.last = Some(v);
        Some((Ok(ev), f))
    });
    Ok(Sse::new(s).keep_alive(KeepAlive::default()))
}

struct Feed {
    st: AppState,
    id: String,
    seat: usize,
    rx: broadcast::Receiver<String>,
    pending: Option<SeatView>,
    last: Option<SeatView>,
}

impl Feed {
    /// The next view that differs from the last one sent.
    async fn next_view(&mut self) -> Option<SeatView> {
        loop {
            if self.last.as_ref().is_some_and(|v| v.status == Status::Finished) {
                return None;
            }
            if let Some(v) = self.pending.take() {
                if self.last.as_ref() != Some(&v) {
                    return Some(v);
                }
            }
            match self.rx.recv().await {
                Ok(changed) if changed != self.id => continue,
                Ok(_) | Err(broadcast::error::RecvError::Lagged(_)) => {}
                Err(broadcast::error::RecvError::Closed) => return None,
            }
            self.pending = Some(self.st.service.view(&self.id, self.seat).ok()?);
        }
    }
}
