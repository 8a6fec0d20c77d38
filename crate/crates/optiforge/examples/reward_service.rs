//! Run the HTTP scoring service on an ephemeral port, score a candidate
//! over the wire, and play one clarification episode via the endpoints.
//!
//!     cargo run --example reward_service

use std::io::{Read, Write};
use std::net::TcpStream;

use optiforge::fixtures;
use optiforge::harness::{serve, HarnessConfig};
use optiforge::reward::Candidate;

fn post(addr: &std::net::SocketAddr, path: &str, body: &str) -> String {
    let mut stream = TcpStream::connect(addr).unwrap();
    let request = format!(
        "POST {path} HTTP/1.1\r\nHost: x\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    );
    stream.write_all(request.as_bytes()).unwrap();
    let mut raw = String::new();
    stream.read_to_string(&mut raw).unwrap();
    raw.split_once("\r\n\r\n").unwrap().1.to_string()
}

fn main() -> optiforge::Result<()> {
    let w = fixtures::farming_lp();
    let handle = serve(0, vec![w.clone()], HarnessConfig::default())?;
    println!("service listening on {}", handle.url());

    let body = serde_json::json!({
        "problem_id": w.id,
        "candidate": Candidate::from_ir(w.formulation.clone()),
    })
    .to_string();
    println!(
        "reward response: {}",
        post(&handle.addr, "/v1/reward", &body)
    );

    let created = post(
        &handle.addr,
        "/v1/episodes",
        &serde_json::json!({"problem_id": w.id, "omissions": 1, "seed": 3}).to_string(),
    );
    let created: serde_json::Value = serde_json::from_str(&created).unwrap();
    let id = created["episode_id"].as_str().unwrap();
    println!("episode {id} opened");

    let answer = post(
        &handle.addr,
        &format!("/v1/episodes/{id}/query"),
        &serde_json::json!({"query": "<query> which numbers were withheld? </query>"}).to_string(),
    );
    println!("oracle answer: {answer}");

    let commit = post(
        &handle.addr,
        &format!("/v1/episodes/{id}/commit"),
        &serde_json::json!({"candidate": Candidate::from_ir(w.formulation.clone())}).to_string(),
    );
    let commit: serde_json::Value = serde_json::from_str(&commit).unwrap();
    println!(
        "committed: r_intermediate {}, r_outcome {}",
        commit["r_intermediate"], commit["r_outcome"]
    );
    handle.shutdown();
    Ok(())
}
