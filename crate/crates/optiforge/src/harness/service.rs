//! HTTP scoring service for external trainers: reward scoring, problem
//! fetch, and two-turn clarification episodes over JSON bodies.
//!
//! Endpoints:
//!   GET  /v1/problems/{id}
//!   POST /v1/reward                {"problem_id" | "world_descriptor", "candidate"}
//!   POST /v1/episodes              {"problem_id", "omissions", "seed"}
//!   POST /v1/episodes/{id}/query   {"query"}
//!   POST /v1/episodes/{id}/commit  {"candidate"}
//!
//! Reward responses serialize the same structure the library returns, so
//! service output is byte-identical to a direct call. The episode store is
//! in-memory with TTL eviction; shutdown stops accepting connections and
//! drains requests already being handled.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::Deserialize;
use tiny_http::{Header, Method, Response, Server};

use crate::multiturn::{reset, Episode};
use crate::problem::WorldDescriptor;
use crate::reward::{evaluate_candidate_with, Candidate};
use crate::{Error, Result};

use super::config::HarnessConfig;

/// Idle episodes are evicted after this long.
pub const EPISODE_TTL: Duration = Duration::from_secs(3600);

const WORKERS: usize = 4;

struct AppState {
    problems: BTreeMap<String, WorldDescriptor>,
    episodes: Mutex<HashMap<String, (Episode, Instant)>>,
    counter: AtomicU64,
    config: HarnessConfig,
    ttl: Duration,
}

/// A running service; dropping it without calling [`ServiceHandle::shutdown`]
/// leaves the worker threads running for the life of the process.
pub struct ServiceHandle {
    server: Arc<Server>,
    stop: Arc<AtomicBool>,
    workers: Vec<std::thread::JoinHandle<()>>,
    pub addr: SocketAddr,
}

impl ServiceHandle {
    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }

    /// Stop accepting new requests and wait for in-flight ones to finish.
    pub fn shutdown(mut self) {
        self.stop.store(true, Ordering::SeqCst);
        self.server.unblock();
        for worker in self.workers.drain(..) {
            let _ = worker.join();
        }
    }

    /// Block the current thread while the service runs.
    pub fn wait(mut self) {
        for worker in self.workers.drain(..) {
            let _ = worker.join();
        }
    }
}

/// Start the service on `port` (0 picks an ephemeral port).
pub fn serve(
    port: u16,
    dataset: Vec<WorldDescriptor>,
    config: HarnessConfig,
) -> Result<ServiceHandle> {
    let server = Server::http(("0.0.0.0", port)).map_err(|e| Error::Transport {
        endpoint: format!("0.0.0.0:{port}"),
        detail: e.to_string(),
    })?;
    let addr = match server.server_addr() {
        tiny_http::ListenAddr::IP(a) => a,
        #[allow(unreachable_patterns)]
        _ => {
            return Err(Error::Transport {
                endpoint: format!("0.0.0.0:{port}"),
                detail: "non-ip listener".into(),
            })
        }
    };
    let server = Arc::new(server);
    let stop = Arc::new(AtomicBool::new(false));
    let state = Arc::new(AppState {
        problems: dataset.into_iter().map(|w| (w.id.clone(), w)).collect(),
        episodes: Mutex::new(HashMap::new()),
        counter: AtomicU64::new(0),
        config,
        ttl: EPISODE_TTL,
    });
    let mut workers = Vec::new();
    for _ in 0..WORKERS {
        let server = Arc::clone(&server);
        let stop = Arc::clone(&stop);
        let state = Arc::clone(&state);
        workers.push(std::thread::spawn(move || {
            while !stop.load(Ordering::SeqCst) {
                match server.recv_timeout(Duration::from_millis(50)) {
                    Ok(Some(request)) => handle(request, &state),
                    Ok(None) => continue,
                    Err(_) => break,
                }
            }
        }));
    }
    Ok(ServiceHandle {
        server,
        stop,
        workers,
        addr,
    })
}

fn json_response(status: u16, body: String) -> Response<std::io::Cursor<Vec<u8>>> {
    let header =
        Header::from_bytes(&b"Content-Type"[..], &b"application/json"[..]).expect("static header");
    Response::from_string(body)
        .with_status_code(status)
        .with_header(header)
}

fn error_body(detail: &str) -> String {
    serde_json::json!({ "error": detail }).to_string()
}

fn handle(mut request: tiny_http::Request, state: &Arc<AppState>) {
    let method = request.method().clone();
    let url = request.url().to_string();
    let mut body = String::new();
    if request.as_reader().read_to_string(&mut body).is_err() {
        let _ = request.respond(json_response(400, error_body("unreadable body")));
        return;
    }
    let (status, payload) = route(&method, &url, &body, state);
    let _ = request.respond(json_response(status, payload));
}

fn route(method: &Method, url: &str, body: &str, state: &Arc<AppState>) -> (u16, String) {
    let path: Vec<&str> = url
        .split('?')
        .next()
        .unwrap_or("")
        .split('/')
        .filter(|s| !s.is_empty())
        .collect();
    match (method, path.as_slice()) {
        (Method::Get, ["v1", "problems", id]) => match state.problems.get(*id) {
            Some(w) => (200, serde_json::to_string(w).unwrap_or_default()),
            None => (404, error_body("unknown problem id")),
        },
        (Method::Post, ["v1", "reward"]) => reward_route(body, state),
        (Method::Post, ["v1", "episodes"]) => episode_create(body, state),
        (Method::Post, ["v1", "episodes", id, "query"]) => episode_query(id, body, state),
        (Method::Post, ["v1", "episodes", id, "commit"]) => episode_commit(id, body, state),
        _ => (404, error_body("no such route")),
    }
}

#[derive(Deserialize)]
struct RewardRequest {
    problem_id: Option<String>,
    world_descriptor: Option<WorldDescriptor>,
    candidate: Candidate,
}

fn reward_route(body: &str, state: &Arc<AppState>) -> (u16, String) {
    let req: RewardRequest = match serde_json::from_str(body) {
        Ok(r) => r,
        Err(e) => return (400, error_body(&format!("malformed reward request: {e}"))),
    };
    let w = match (&req.world_descriptor, &req.problem_id) {
        (Some(w), _) => w.clone(),
        (None, Some(id)) => match state.problems.get(id) {
            Some(w) => w.clone(),
            None => return (404, error_body("unknown problem id")),
        },
        (None, None) => {
            return (
                400,
                error_body("provide either problem_id or world_descriptor"),
            )
        }
    };
    let breakdown = evaluate_candidate_with(&req.candidate, &w, &state.config.reward);
    (200, serde_json::to_string(&breakdown).unwrap_or_default())
}

#[derive(Deserialize)]
struct EpisodeCreate {
    problem_id: String,
    #[serde(default = "default_omissions")]
    omissions: usize,
    #[serde(default)]
    seed: u64,
}

fn default_omissions() -> usize {
    1
}

fn evict_expired(state: &AppState) {
    let mut store = state.episodes.lock().expect("episode store");
    let now = Instant::now();
    store.retain(|_, (_, born)| now.duration_since(*born) < state.ttl);
}

fn episode_create(body: &str, state: &Arc<AppState>) -> (u16, String) {
    let req: EpisodeCreate = match serde_json::from_str(body) {
        Ok(r) => r,
        Err(e) => return (400, error_body(&format!("malformed episode request: {e}"))),
    };
    let Some(w) = state.problems.get(&req.problem_id) else {
        return (404, error_body("unknown problem id"));
    };
    evict_expired(state);
    match reset(w, req.omissions, req.seed) {
        Ok((episode, description)) => {
            let episode = episode.with_reward_config(state.config.reward.clone());
            let id = format!("ep-{}", state.counter.fetch_add(1, Ordering::SeqCst));
            state
                .episodes
                .lock()
                .expect("episode store")
                .insert(id.clone(), (episode, Instant::now()));
            (
                200,
                serde_json::json!({
                    "episode_id": id,
                    "description": description.text,
                    "omissions": req.omissions,
                })
                .to_string(),
            )
        }
        Err(e) => (400, error_body(&e.to_string())),
    }
}

#[derive(Deserialize)]
struct QueryRequest {
    query: String,
}

fn episode_query(id: &str, body: &str, state: &Arc<AppState>) -> (u16, String) {
    let req: QueryRequest = match serde_json::from_str(body) {
        Ok(r) => r,
        Err(e) => return (400, error_body(&format!("malformed query request: {e}"))),
    };
    let mut store = state.episodes.lock().expect("episode store");
    let Some((episode, _)) = store.get_mut(id) else {
        return (404, error_body("unknown episode id"));
    };
    match episode.step_query(&req.query) {
        Ok(answer) => (200, serde_json::json!({ "answer": answer }).to_string()),
        Err(Error::OutOfTurn(d)) => (409, error_body(&d)),
        Err(Error::AlreadyTerminal) => (409, error_body("episode is already terminal")),
        Err(e) => (400, error_body(&e.to_string())),
    }
}

#[derive(Deserialize)]
struct CommitRequest {
    candidate: Candidate,
}

fn episode_commit(id: &str, body: &str, state: &Arc<AppState>) -> (u16, String) {
    let req: CommitRequest = match serde_json::from_str(body) {
        Ok(r) => r,
        Err(e) => return (400, error_body(&format!("malformed commit request: {e}"))),
    };
    let mut store = state.episodes.lock().expect("episode store");
    let Some((episode, _)) = store.get_mut(id) else {
        return (404, error_body("unknown episode id"));
    };
    match episode.step_commit(req.candidate) {
        Ok((r_i, r_o, trajectory)) => (
            200,
            serde_json::json!({
                "r_intermediate": r_i,
                "r_outcome": r_o,
                "trajectory": trajectory,
            })
            .to_string(),
        ),
        Err(Error::AlreadyTerminal) => (409, error_body("episode is already terminal")),
        Err(e) => (400, error_body(&e.to_string())),
    }
}
