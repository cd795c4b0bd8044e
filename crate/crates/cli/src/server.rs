//! Session API: one problem per process, driven by posted actions.
//!
//! Reads are served from a snapshot refreshed after every action, so they
//! never wait on a running action. `POST /action` answers 409 while another
//! action is executing.

use std::collections::BTreeSet;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::{json, Value};
use tokio::sync::Mutex;

use geoprove_core::agents::{AgentAction, HistoryEntry, Session};
use geoprove_core::output::{figure_svg, FigureContent};

#[derive(Default)]
struct Snapshot {
    state: Value,
    figure: String,
    symbols: Value,
    dependency: Value,
    rules: Option<Value>,
    statements: Vec<String>,
    history: Vec<HistoryEntry>,
}

fn take_snapshot(s: &Session) -> Snapshot {
    let st = &s.state;
    let proof = st.proofs().into_iter().next();
    let statements = st.statement_texts();
    Snapshot {
        state: json!({
            "problem": st.problem.name,
            "text": st.problem.to_text(),
            "status": st.status,
            "round": st.round,
            "goals": st.problem.goals.iter().map(|g| st.points().text(g)).collect::<Vec<_>>(),
            "goal_states": st.goal_states,
            "statements": statements,
            "history": s.history,
        }),
        figure: figure_svg(st, FigureContent::Full, &BTreeSet::new()),
        symbols: st.symbols.to_json(st.points()),
        dependency: st.graph.to_json(st.points(), proof.as_ref()),
        rules: None,
        statements,
        history: s.history.clone(),
    }
}

#[derive(Clone)]
pub struct AppState {
    pub session: Arc<Mutex<Session>>,
    snapshot: Arc<RwLock<Snapshot>>,
}

impl AppState {
    pub fn new(session: Session) -> AppState {
        let snap = take_snapshot(&session);
        AppState { session: Arc::new(Mutex::new(session)), snapshot: Arc::new(RwLock::new(snap)) }
    }
}

fn error(code: StatusCode, msg: impl ToString) -> Response {
    (code, Json(json!({ "error": msg.to_string() }))).into_response()
}

async fn get_state(State(app): State<AppState>) -> Json<Value> {
    Json(app.snapshot.read().unwrap().state.clone())
}

async fn get_figure(State(app): State<AppState>) -> Response {
    let svg = app.snapshot.read().unwrap().figure.clone();
    ([(header::CONTENT_TYPE, "image/svg+xml")], svg).into_response()
}

async fn get_symbols(State(app): State<AppState>) -> Json<Value> {
    Json(app.snapshot.read().unwrap().symbols.clone())
}

async fn get_dependency(State(app): State<AppState>) -> Json<Value> {
    Json(app.snapshot.read().unwrap().dependency.clone())
}

async fn get_history(State(app): State<AppState>, Path(k): Path<usize>) -> Response {
    let snap = app.snapshot.read().unwrap();
    let Some(h) = snap.history.get(k) else {
        return error(StatusCode::NOT_FOUND, format!("no action {k}"));
    };
    let statements: Vec<&String> = snap.statements.iter().take(h.statements).collect();
    Json(json!({ "action": h.action, "report": h.report, "statements": statements })).into_response()
}

/// Rules with the number of matches each has now; computed once per state.
async fn get_rules(State(app): State<AppState>) -> Response {
    if let Some(r) = app.snapshot.read().unwrap().rules.clone() {
        return Json(r).into_response();
    }
    let mut guard = app.session.clone().lock_owned().await;
    let computed = tokio::task::spawn_blocking(move || {
        let st = &mut guard.state;
        let rules: Vec<Value> = (0..st.rules.len())
            .map(|i| {
                let n = st.matches(&[i]).len();
                let r = &st.rules[i];
                json!({ "id": r.id, "title": r.title, "text": r.to_string(), "matches": n })
            })
            .collect();
        Value::Array(rules)
    })
    .await;
    match computed {
        Ok(v) => {
            app.snapshot.write().unwrap().rules = Some(v.clone());
            Json(v).into_response()
        }
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
    }
}

async fn post_action(State(app): State<AppState>, body: Bytes) -> Response {
    let action: AgentAction = match serde_json::from_slice(&body) {
        Ok(a) => a,
        Err(e) => return error(StatusCode::BAD_REQUEST, e),
    };
    let Ok(mut guard) = app.session.clone().try_lock_owned() else {
        return error(StatusCode::CONFLICT, "another action is executing");
    };
    let done = tokio::task::spawn_blocking(move || {
        let r = guard.execute(action);
        let snap = take_snapshot(&guard);
        (r, snap)
    })
    .await;
    match done {
        Ok((Ok(report), snap)) => {
            *app.snapshot.write().unwrap() = snap;
            Json(serde_json::to_value(report).unwrap_or(Value::Null)).into_response()
        }
        Ok((Err(e), _)) => error(StatusCode::BAD_REQUEST, e),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
    }
}

pub fn router(app: AppState) -> Router {
    Router::new()
        .route("/state", get(get_state))
        .route("/figure.svg", get(get_figure))
        .route("/graphs/symbols", get(get_symbols))
        .route("/graphs/dependency", get(get_dependency))
        .route("/rules", get(get_rules))
        .route("/history/:k", get(get_history))
        .route("/action", post(post_action))
        .with_state(app)
}

pub async fn serve(session: Session, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    log::info!("session api on http://{}", listener.local_addr()?);
    axum::serve(listener, router(AppState::new(session))).await
}
