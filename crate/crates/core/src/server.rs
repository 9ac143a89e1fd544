//! In-memory HTTP session service.
//!
//! Sessions are independent; presses within one session are applied in
//! arrival order under that session's lock. Event timestamps are
//! milliseconds since the session was created.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};
use std::time::Instant;

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use uuid::Uuid;

use crate::engine::{EngineState, FeedbackEvent};
use crate::geometry::{resolve_region, CalibrationFile, CalibrationProfile, Point};
use crate::layout::{builtin_layout, builtin_layouts, Layout, Method, Region};
use crate::session::{CalibrationSource, Payload, SessionEvent, SessionHeader, SessionLog};

struct LiveSession {
    engine: EngineState,
    profile: CalibrationProfile,
    log: SessionLog,
    started: Instant,
}

#[derive(Default)]
struct AppState {
    sessions: RwLock<HashMap<Uuid, Arc<Mutex<LiveSession>>>>,
}

type Shared = Arc<AppState>;

pub fn router() -> Router {
    Router::new()
        .route("/v1/layouts", get(list_layouts))
        .route("/v1/session", post(create_session))
        .route("/v1/session/{id}", axum::routing::delete(delete_session))
        .route("/v1/session/{id}/press", post(press))
        .route("/v1/session/{id}/log", get(export_log))
        .with_state(Shared::default())
}

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

fn bad_request(msg: impl Into<String>) -> ApiError {
    ApiError(StatusCode::BAD_REQUEST, msg.into())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ProfileBody {
    Profile(CalibrationProfile),
    Calibration(CalibrationFile),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateBody {
    method: Method,
    #[serde(default)]
    layout_id: Option<String>,
    #[serde(default)]
    profile: Option<ProfileBody>,
    #[serde(default)]
    participant_id: Option<String>,
}

#[derive(Serialize)]
struct Created {
    session_id: Uuid,
    layout_id: String,
    profile: CalibrationProfile,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PressBody {
    Region { region: String },
    Touch { x: f64, y: f64 },
}

#[derive(Serialize)]
struct Pressed {
    events: Vec<FeedbackEvent>,
    transcript: String,
    /// The resolved region, or null when a touch fell outside every key.
    region: Option<Region>,
    terminated: bool,
}

async fn list_layouts() -> Json<serde_json::Value> {
    let layouts: Vec<_> = builtin_layouts().iter().map(Layout::to_document).collect();
    Json(json!(layouts))
}

async fn create_session(
    State(state): State<Shared>,
    body: Result<Json<CreateBody>, axum::extract::rejection::JsonRejection>,
) -> Result<(StatusCode, Json<Created>), ApiError> {
    let Json(body) = body.map_err(|e| bad_request(e.body_text()))?;
    let layout = match &body.layout_id {
        None => builtin_layout(body.method),
        Some(id) => builtin_layouts()
            .into_iter()
            .find(|l| &l.id == id)
            .ok_or_else(|| bad_request(format!("unknown layout id {id}")))?,
    };
    if layout.method != body.method {
        return Err(bad_request(format!("layout {} is for {}", layout.id, layout.method)));
    }
    let base = match body.profile {
        None => CalibrationProfile::reference(),
        Some(ProfileBody::Profile(p)) => p,
        Some(ProfileBody::Calibration(c)) => c.derive(&[]).map_err(|e| bad_request(e.to_string()))?,
    };
    let profile = base.for_layout(&layout).map_err(|e| bad_request(e.to_string()))?;
    profile.validate().map_err(|e| bad_request(e.to_string()))?;

    let engine = EngineState::new(layout.clone()).map_err(|e| bad_request(e.to_string()))?;
    let log = SessionLog {
        header: SessionHeader {
            method: layout.method,
            layout_id: layout.id.clone(),
            calibration: Some(CalibrationSource::Inline(profile.clone())),
            participant_id: body.participant_id,
            prescribed: None,
        },
        events: Vec::new(),
    };
    let id = Uuid::new_v4();
    let live = LiveSession {
        engine,
        profile: profile.clone(),
        log,
        started: Instant::now(),
    };
    state
        .sessions
        .write()
        .expect("session table lock")
        .insert(id, Arc::new(Mutex::new(live)));
    Ok((
        StatusCode::CREATED,
        Json(Created {
            session_id: id,
            layout_id: layout.id,
            profile,
        }),
    ))
}

fn lookup(state: &Shared, id: &str) -> Result<Arc<Mutex<LiveSession>>, ApiError> {
    let not_found = || ApiError(StatusCode::NOT_FOUND, format!("no session {id}"));
    let id = Uuid::parse_str(id).map_err(|_| not_found())?;
    state
        .sessions
        .read()
        .expect("session table lock")
        .get(&id)
        .cloned()
        .ok_or_else(not_found)
}

async fn press(
    State(state): State<Shared>,
    Path(id): Path<String>,
    body: Result<Json<PressBody>, axum::extract::rejection::JsonRejection>,
) -> Result<Json<Pressed>, ApiError> {
    let session = lookup(&state, &id)?;
    let Json(body) = body.map_err(|e| bad_request(e.body_text()))?;
    let mut s = session.lock().expect("session lock");
    if s.engine.is_terminated() {
        return Err(ApiError(StatusCode::CONFLICT, "session has ended".into()));
    }

    let (payload, region) = match body {
        PressBody::Region { region } => {
            let r = Region::parse(&region);
            if s.profile.anchor(&r).is_none() {
                return Err(bad_request(format!("unknown region {region}")));
            }
            (Payload::Region(r.clone()), Some(r))
        }
        PressBody::Touch { x, y } => {
            let p = Point::new(x, y);
            if !p.in_unit_square() {
                return Err(bad_request(format!("touch ({x}, {y}) outside the unit square")));
            }
            (Payload::Touch(p), resolve_region(p, &s.profile))
        }
    };
    if let Some(first) = s.log.events.first() {
        if std::mem::discriminant(&first.payload) != std::mem::discriminant(&payload) {
            return Err(bad_request("a session log cannot mix region and touch presses"));
        }
    }

    let events = match &region {
        Some(r) => s.engine.apply(r).map_err(|e| bad_request(e.to_string()))?,
        None => Vec::new(),
    };
    let last = s.log.events.last().map_or(0, |e| e.t_ms);
    let t_ms = (s.started.elapsed().as_millis() as u64).max(last);
    s.log.events.push(SessionEvent { t_ms, payload });

    Ok(Json(Pressed {
        events,
        transcript: s.engine.transcript().to_string(),
        region,
        terminated: s.engine.is_terminated(),
    }))
}

async fn export_log(State(state): State<Shared>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let session = lookup(&state, &id)?;
    let body = session.lock().expect("session lock").log.serialize();
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], body).into_response())
}

async fn delete_session(State(state): State<Shared>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    lookup(&state, &id)?;
    let key = Uuid::parse_str(&id).expect("looked up above");
    state.sessions.write().expect("session table lock").remove(&key);
    Ok(StatusCode::NO_CONTENT)
}
