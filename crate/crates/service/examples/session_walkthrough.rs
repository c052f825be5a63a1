//! Drives the session API in-process: create, drag the shape, flow
//! forward, then flow backward until the session turns unstable.
//!
//! cargo run -p ricci-rev-service --example session_walkthrough
//!
//! The same requests work against `ricci-rev serve`.

use axum::body::Body;
use axum::http::{Method, Request};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use ricci_rev_service::{router, AppState};

async fn send(app: &Router, method: Method, uri: &str, body: Value) -> Value {
    let req = Request::builder()
        .method(method.clone())
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v: Value = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    println!("{method} {uri} -> {status}");
    v
}

#[tokio::main]
async fn main() {
    let app = router(AppState::default());
    let created = send(&app, Method::POST, "/api/sessions", json!({"c3": 0.0, "c5": 0.0, "grid": 256})).await;
    let id = created["id"].as_str().unwrap().to_string();
    let base = format!("/api/sessions/{id}");

    let shaped = send(&app, Method::PUT, &format!("{base}/shape"), json!({"c3": 0.766, "c5": -0.091})).await;
    println!("  params {} clamped {}", shaped["params"], shaped["clamped"]);
    let dragged = send(&app, Method::PUT, &format!("{base}/shape"), json!({"c3": 0.766, "c5": -0.6})).await;
    println!("  params {} clamped {}", dragged["params"], dragged["clamped"]);
    // A shape on the boundary is only marginally embeddable; flow the
    // dumbbell instead.
    send(&app, Method::PUT, &format!("{base}/shape"), json!({"c3": 0.766, "c5": -0.091})).await;

    send(&app, Method::POST, &format!("{base}/mode"), json!({"mode": "flow"})).await;
    let fwd = send(&app, Method::POST, &format!("{base}/step"), json!({"count": 20, "direction": "forward"})).await;
    println!(
        "  t {} status {} area {}",
        fwd["snapshot"]["t"], fwd["status"], fwd["snapshot"]["diagnostics"]["area"]
    );
    let back = send(&app, Method::POST, &format!("{base}/step"), json!({"count": 2000, "direction": "backward"})).await;
    println!(
        "  t {} status {} after {} steps: {}",
        back["snapshot"]["t"], back["status"], back["steps_taken"], back["halt_reason"]
    );
    let refused = send(&app, Method::POST, &format!("{base}/step"), json!({"count": 1})).await;
    println!("  {}", refused["error"]);
}
