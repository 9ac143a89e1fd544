use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use fbt_core::server::router;
use fbt_core::{builtin_layout, parse_session_log, replay_session, CalibrationProfile, Method};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, String) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn json_call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (s, text) = call(app, method, uri, body).await;
    (
        s,
        if text.is_empty() {
            Value::Null
        } else {
            serde_json::from_str(&text).unwrap()
        },
    )
}

async fn open(app: &Router, body: Value) -> String {
    let (status, v) = json_call(app, "POST", "/v1/session", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    v["session_id"].as_str().unwrap().to_string()
}

#[tokio::test]
async fn double_digit_two_by_region() {
    let app = router();
    let id = open(&app, json!({ "method": "double_digit_fdi" })).await;
    let uri = format!("/v1/session/{id}/press");
    for r in ["Index", "Index"] {
        json_call(&app, "POST", &uri, Some(json!({ "region": r }))).await;
    }
    let (status, v) = json_call(&app, "POST", &uri, Some(json!({ "region": "Thumb" }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["transcript"], "2");
    assert_eq!(v["events"][0]["kind"], "commit_echo");
    assert_eq!(v["events"][0]["utterance"], "committed two");

    let (_, v) = json_call(&app, "POST", &uri, Some(json!({ "region": "BottomCenter" }))).await;
    assert_eq!(v["terminated"], true);
    let (status, _) = json_call(&app, "POST", &uri, Some(json!({ "region": "Index" }))).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn fti_touch_session_exports_a_replayable_log() {
    let app = router();
    let (status, created) = json_call(&app, "POST", "/v1/session", Some(json!({ "method": "fti" }))).await;
    assert_eq!(status, StatusCode::CREATED);
    let id = created["session_id"].as_str().unwrap();
    let profile: CalibrationProfile = serde_json::from_value(created["profile"].clone()).unwrap();
    let at = |name: &str| {
        let p = profile.anchor(&fbt_core::Region::parse(name)).unwrap();
        json!({ "x": p.x, "y": p.y })
    };
    let uri = format!("/v1/session/{id}/press");
    let mut last = Value::Null;
    for name in ["AboveThumb", "AboveThumb", "AboveThumb", "Thumb"] {
        let (status, v) = json_call(&app, "POST", &uri, Some(at(name))).await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(v["region"], name);
        last = v;
    }
    assert_eq!(last["transcript"], "S");

    // a touch far from every key is logged but does nothing
    let (_, v) = json_call(&app, "POST", &uri, Some(json!({ "x": 0.31, "y": 0.05 }))).await;
    assert_eq!(v["region"], Value::Null);
    assert_eq!(v["events"], json!([]));

    // mixing payload kinds is refused
    let (status, _) = json_call(&app, "POST", &uri, Some(json!({ "region": "Thumb" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, text) = call(&app, "GET", &format!("/v1/session/{id}/log"), None).await;
    assert_eq!(status, StatusCode::OK);
    let log = parse_session_log(&text).unwrap();
    assert_eq!(log.events.len(), 5);
    let replay = replay_session(&log, &builtin_layout(Method::Fti), &profile).unwrap();
    assert_eq!(replay.transcript, "S");
    assert_eq!(replay.skipped(), 1);
}

#[tokio::test]
async fn custom_calibration_is_used() {
    let app = router();
    let cal = json!({ "fingertips": [
        { "x": 0.0, "y": 0.3 }, { "x": 0.0, "y": 0.4 }, { "x": 0.0, "y": 0.5 }, { "x": 0.0, "y": 0.6 }, { "x": 1.0, "y": 0.5 }
    ]});
    let (status, v) = json_call(
        &app,
        "POST",
        "/v1/session",
        Some(json!({ "method": "single_digit_fdi", "profile": cal })),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(v["profile"]["anchors"].as_array().unwrap().len(), 12);
    let id = v["session_id"].as_str().unwrap();
    let (_, v) = json_call(
        &app,
        "POST",
        &format!("/v1/session/{id}/press"),
        Some(json!({ "x": 0.05, "y": 0.3 })),
    )
    .await;
    assert_eq!(v["region"], "Index");
    assert_eq!(v["transcript"], "4");
}

#[tokio::test]
async fn errors_and_lifecycle() {
    let app = router();
    let missing = "/v1/session/00000000-0000-0000-0000-000000000000";
    assert_eq!(
        call(&app, "GET", &format!("{missing}/log"), None).await.0,
        StatusCode::NOT_FOUND
    );
    assert_eq!(
        call(
            &app,
            "POST",
            &format!("{missing}/press"),
            Some(json!({ "region": "Index" }))
        )
        .await
        .0,
        StatusCode::NOT_FOUND
    );
    assert_eq!(
        call(&app, "DELETE", "/v1/session/not-a-uuid", None).await.0,
        StatusCode::NOT_FOUND
    );

    let (status, _) = json_call(&app, "POST", "/v1/session", Some(json!({ "method": "morse" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = json_call(
        &app,
        "POST",
        "/v1/session",
        Some(json!({ "method": "fti", "layout_id": "single-digit-default" })),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let id = open(
        &app,
        json!({ "method": "single_digit_fdi", "layout_id": "single-digit-default" }),
    )
    .await;
    let uri = format!("/v1/session/{id}/press");
    assert_eq!(
        call(&app, "POST", &uri, Some(json!({ "region": "Pinky" }))).await.0,
        StatusCode::BAD_REQUEST
    );
    assert_eq!(
        call(&app, "POST", &uri, Some(json!({ "x": 2.0, "y": 0.5 }))).await.0,
        StatusCode::BAD_REQUEST
    );
    assert_eq!(
        call(&app, "DELETE", &format!("/v1/session/{id}"), None).await.0,
        StatusCode::NO_CONTENT
    );
    assert_eq!(
        call(&app, "POST", &uri, Some(json!({ "region": "Index" }))).await.0,
        StatusCode::NOT_FOUND
    );
}

#[tokio::test]
async fn layouts_are_listed() {
    let app = router();
    let (status, v) = json_call(&app, "GET", "/v1/layouts", None).await;
    assert_eq!(status, StatusCode::OK);
    let ids: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["single-digit-default", "double-digit-default", "fti-default"]);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_sessions_stay_separate() {
    let app = router();
    let mut handles = Vec::new();
    for k in 0..8 {
        let app = app.clone();
        handles.push(tokio::spawn(async move {
            let id = open(&app, json!({ "method": "single_digit_fdi" })).await;
            let uri = format!("/v1/session/{id}/press");
            let region = if k % 2 == 0 { "Index" } else { "Middle" };
            for _ in 0..=k {
                json_call(&app, "POST", &uri, Some(json!({ "region": region }))).await;
            }
            let (_, v) = json_call(&app, "POST", &uri, Some(json!({ "region": "Center" }))).await;
            (k, v["transcript"].as_str().unwrap().to_string())
        }));
    }
    for h in handles {
        let (k, transcript) = h.await.unwrap();
        let digit = if k % 2 == 0 { "4" } else { "5" };
        assert_eq!(transcript, digit.repeat(k + 1) + "9");
    }
}
