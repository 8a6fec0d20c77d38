//! End-to-end tests of the HTTP scoring service: routing, status codes,
//! byte-level parity with library calls, episode isolation, and graceful
//! shutdown.

use std::io::{Read, Write};
use std::net::TcpStream;

use optiforge::fixtures;
use optiforge::harness::{serve, HarnessConfig};
use optiforge::reward::{evaluate_candidate, Candidate};

fn http(addr: &std::net::SocketAddr, method: &str, path: &str, body: &str) -> (u16, String) {
    let mut stream = TcpStream::connect(addr).expect("connect");
    let request = format!(
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    );
    stream.write_all(request.as_bytes()).expect("write");
    let mut raw = String::new();
    stream.read_to_string(&mut raw).expect("read");
    let (head, payload) = raw.split_once("\r\n\r\n").expect("http response");
    let status: u16 = head
        .split_whitespace()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .expect("status code");
    (status, payload.to_string())
}

fn start() -> optiforge::harness::ServiceHandle {
    serve(
        0,
        vec![fixtures::farming_lp(), fixtures::warehouse_milp()],
        HarnessConfig::default(),
    )
    .expect("service starts")
}

#[test]
fn problem_fetch_and_unknown_id() {
    let handle = start();
    let (status, body) = http(&handle.addr, "GET", "/v1/problems/fixture-farming-lp", "");
    assert_eq!(status, 200);
    let w: optiforge::problem::WorldDescriptor = serde_json::from_str(&body).unwrap();
    assert_eq!(w.id, "fixture-farming-lp");

    let (status, _) = http(&handle.addr, "GET", "/v1/problems/nope", "");
    assert_eq!(status, 404);
    handle.shutdown();
}

#[test]
fn reward_response_is_byte_identical_to_library_call() {
    let handle = start();
    let w = fixtures::farming_lp();
    let candidate = Candidate::from_ir(w.formulation.clone());
    let body = serde_json::json!({
        "problem_id": w.id,
        "candidate": candidate,
    })
    .to_string();
    let (status, payload) = http(&handle.addr, "POST", "/v1/reward", &body);
    assert_eq!(status, 200);
    let library = serde_json::to_string(&evaluate_candidate(&candidate, &w)).unwrap();
    assert_eq!(payload, library);

    // inline world descriptor variant
    let body = serde_json::json!({
        "world_descriptor": w,
        "candidate": candidate,
    })
    .to_string();
    let (status, payload) = http(&handle.addr, "POST", "/v1/reward", &body);
    assert_eq!(status, 200);
    assert_eq!(payload, library);
    handle.shutdown();
}

#[test]
fn malformed_bodies_get_400() {
    let handle = start();
    let (status, _) = http(&handle.addr, "POST", "/v1/reward", "{not json");
    assert_eq!(status, 400);
    let (status, _) = http(&handle.addr, "POST", "/v1/reward", "{\"candidate\": null}");
    assert_eq!(status, 400);
    handle.shutdown();
}

#[test]
fn episode_flow_with_out_of_turn_conflicts() {
    let handle = start();
    let create = serde_json::json!({
        "problem_id": "fixture-farming-lp",
        "omissions": 1,
        "seed": 3,
    })
    .to_string();
    let (status, body) = http(&handle.addr, "POST", "/v1/episodes", &create);
    assert_eq!(status, 200, "{body}");
    let created: serde_json::Value = serde_json::from_str(&body).unwrap();
    let id = created["episode_id"].as_str().unwrap().to_string();
    assert!(!created["description"].as_str().unwrap().is_empty());

    let q = serde_json::json!({"query": "<query> what values are missing? </query>"}).to_string();
    let (status, body) = http(
        &handle.addr,
        "POST",
        &format!("/v1/episodes/{id}/query"),
        &q,
    );
    assert_eq!(status, 200, "{body}");

    // a second query is out of turn
    let (status, _) = http(
        &handle.addr,
        "POST",
        &format!("/v1/episodes/{id}/query"),
        &q,
    );
    assert_eq!(status, 409);

    let w = fixtures::farming_lp();
    let commit =
        serde_json::json!({"candidate": Candidate::from_ir(w.formulation.clone())}).to_string();
    let (status, body) = http(
        &handle.addr,
        "POST",
        &format!("/v1/episodes/{id}/commit"),
        &commit,
    );
    assert_eq!(status, 200, "{body}");
    let result: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(result["r_outcome"].as_f64().unwrap(), 1.2);

    // committing a sealed episode conflicts
    let (status, _) = http(
        &handle.addr,
        "POST",
        &format!("/v1/episodes/{id}/commit"),
        &commit,
    );
    assert_eq!(status, 409);

    // unknown episode id
    let (status, _) = http(&handle.addr, "POST", "/v1/episodes/ep-999/query", &q);
    assert_eq!(status, 404);
    handle.shutdown();
}

#[test]
fn concurrent_episodes_are_isolated() {
    let handle = start();
    let create = |seed: u64| {
        let body = serde_json::json!({
            "problem_id": "fixture-warehouse-milp",
            "omissions": 2,
            "seed": seed,
        })
        .to_string();
        let (status, body) = http(&handle.addr, "POST", "/v1/episodes", &body);
        assert_eq!(status, 200);
        let v: serde_json::Value = serde_json::from_str(&body).unwrap();
        v["episode_id"].as_str().unwrap().to_string()
    };
    let a = create(1);
    let b = create(2);
    assert_ne!(a, b);

    // advance only episode a; b still accepts its first query
    let q = serde_json::json!({"query": "<query> capacity? </query>"}).to_string();
    let (status, _) = http(&handle.addr, "POST", &format!("/v1/episodes/{a}/query"), &q);
    assert_eq!(status, 200);
    let (status, _) = http(&handle.addr, "POST", &format!("/v1/episodes/{b}/query"), &q);
    assert_eq!(status, 200);
    handle.shutdown();
}
