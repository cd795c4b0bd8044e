use axum::body::Body;
use axum::http::{Request, StatusCode};
use serde_json::{json, Value};
use tower::ServiceExt;

use geoprove::server::{router, AppState};
use geoprove_core::agents::Session;
use geoprove_core::data;
use geoprove_core::kernel::{KernelOptions, ProofState};
use geoprove_core::parse::{find_problem, parse_definitions, parse_rules};

fn app(name: &str) -> AppState {
    let defs = parse_definitions(data::DEFS).unwrap();
    let problem = find_problem(data::PROBLEMS, name, &defs).unwrap();
    let state = ProofState::new(problem, defs, parse_rules(data::RULES).unwrap(), 0, KernelOptions::default()).unwrap();
    AppState::new(Session::new(state))
}

async fn send(app: &AppState, req: Request<Body>) -> (StatusCode, String, Vec<u8>) {
    let res = router(app.clone()).oneshot(req).await.unwrap();
    let status = res.status();
    let ctype = res.headers().get("content-type").map(|v| v.to_str().unwrap().to_string()).unwrap_or_default();
    let body = axum::body::to_bytes(res.into_body(), usize::MAX).await.unwrap();
    (status, ctype, body.to_vec())
}

async fn get(app: &AppState, path: &str) -> (StatusCode, Value) {
    let (s, _, b) = send(app, Request::get(path).body(Body::empty()).unwrap()).await;
    (s, serde_json::from_slice(&b).unwrap_or(Value::Null))
}

async fn post(app: &AppState, body: &str) -> (StatusCode, Value) {
    let req = Request::post("/action").header("content-type", "application/json").body(Body::from(body.to_string())).unwrap();
    let (s, _, b) = send(app, req).await;
    (s, serde_json::from_slice(&b).unwrap_or(Value::Null))
}

#[tokio::test]
async fn state_describes_problem() {
    let a = app("isosceles");
    let (s, v) = get(&a, "/state").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["problem"], "isosceles");
    assert_eq!(v["status"], "running");
    assert_eq!(v["goals"], json!(["eqangle a b b c b c a c"]));
    assert!(v["history"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn applying_r13_solves_isosceles() {
    let a = app("isosceles");
    let (s, v) = post(&a, r#"{"action":"match_and_apply_rule","rule":"r13"}"#).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["status"], "solved");
    let new: Vec<&str> = v["new_statements"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert!(new.iter().any(|t| t.starts_with("eqangle")), "{new:?}");
    let (_, st) = get(&a, "/state").await;
    assert_eq!(st["status"], "solved");
    assert_eq!(st["history"].as_array().unwrap().len(), 1);
    let (_, dep) = get(&a, "/graphs/dependency").await;
    assert!(dep["reduced"]["nodes"].as_array().unwrap().len() <= dep["full"]["nodes"].as_array().unwrap().len());
    assert!(!dep["reduced"].is_null());
}

#[tokio::test]
async fn history_serves_each_action() {
    let a = app("orthocenter_aux");
    post(&a, r#"{"action":"run_saturation_step"}"#).await;
    post(&a, r#"{"action":"check_statement","statement":"perp a d b c"}"#).await;
    let (s, h0) = get(&a, "/history/0").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(h0["action"]["action"], "run_saturation_step");
    let (_, h1) = get(&a, "/history/1").await;
    assert_eq!(h1["report"]["check"]["numeric"], true);
    assert_eq!(h0["statements"].as_array().unwrap().len(), h1["statements"].as_array().unwrap().len());
    let (s, _) = get(&a, "/history/2").await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn bad_requests_are_rejected() {
    let a = app("isosceles");
    let (s, v) = post(&a, "not json").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert!(v["error"].is_string());
    let (s, _) = post(&a, r#"{"action":"fly"}"#).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, v) = post(&a, r#"{"action":"match_and_apply_rule","rule":"r999"}"#).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert!(v["error"].as_str().unwrap().contains("r999"));
    let (s, v) = post(&a, r#"{"action":"add_clause","clause":"e = nonsense e a"}"#).await;
    assert_eq!(s, StatusCode::BAD_REQUEST, "{v}");
}

#[tokio::test]
async fn busy_session_answers_conflict() {
    let a = app("isosceles");
    let guard = a.session.lock().await;
    let (s, v) = post(&a, r#"{"action":"run_saturation_step"}"#).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert!(v["error"].is_string());
    // reads still answer from the snapshot
    let (s, _) = get(&a, "/state").await;
    assert_eq!(s, StatusCode::OK);
    drop(guard);
    let (s, _) = post(&a, r#"{"action":"run_saturation_step"}"#).await;
    assert_eq!(s, StatusCode::OK);
}

#[tokio::test]
async fn rules_list_match_counts() {
    let a = app("isosceles");
    let (s, v) = get(&a, "/rules").await;
    assert_eq!(s, StatusCode::OK);
    let rules = v.as_array().unwrap();
    let r13 = rules.iter().find(|r| r["id"] == "r13").unwrap();
    assert!(r13["matches"].as_u64().unwrap() >= 1);
    assert!(r13["text"].as_str().unwrap().contains("=>"));
    let (_, again) = get(&a, "/rules").await;
    assert_eq!(again, v);
}

#[tokio::test]
async fn figure_is_svg() {
    let a = app("orthocenter_aux");
    let (s, ctype, body) = send(&a, Request::get("/figure.svg").body(Body::empty()).unwrap()).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(ctype, "image/svg+xml");
    let svg = String::from_utf8(body).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("</text>").count(), 5);
}

#[tokio::test]
async fn symbols_graph_lists_lines() {
    let a = app("orthocenter_aux");
    let (s, v) = get(&a, "/graphs/symbols").await;
    assert_eq!(s, StatusCode::OK);
    assert!(!v["lines"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn add_clause_then_queries_graphs() {
    let a = app("orthocenter_noaux");
    let (s, v) = post(&a, r#"{"action":"add_clause","clause":"e = on_line e a c, on_line e b d"}"#).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert!(!v["new_statements"].as_array().unwrap().is_empty());
    let (_, g) = post(&a, r#"{"action":"query_graphs"}"#).await;
    assert!(g["graphs"]["symbols"].is_object());
    let (_, st) = get(&a, "/state").await;
    assert!(st["text"].as_str().unwrap().contains("e = on_line e a c"));
}
