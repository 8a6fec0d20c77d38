//! Optional external text-generation client. The default pipeline is fully
//! offline; this hook lets callers route description generation through an
//! HTTP endpoint speaking the generic `{"prompt"} -> {"text"}` JSON
//! contract. Provider-specific schemas are expected to sit behind a local
//! adapter or proxy.

use std::io::{Read, Write};
use std::net::TcpStream;
use std::time::Duration;

use crate::problem::WorldDescriptor;
use crate::{Error, Result};

use super::{verify_description, Description, StyleTag};

/// Environment variable naming the endpoint URL (http://host:port/path).
pub const ENDPOINT_ENV: &str = "OPTIFORGE_LLM_ENDPOINT";
/// Environment variable carrying an optional bearer token.
pub const TOKEN_ENV: &str = "OPTIFORGE_LLM_TOKEN";

/// Attempts before external generation gives up.
pub const RETRY_CAP: usize = 5;

/// Anything that can turn a prompt into text.
pub trait TextClient {
    fn complete(&self, prompt: &str) -> Result<String>;
    /// Identity used in error messages.
    fn endpoint(&self) -> String {
        "unknown".to_string()
    }
}

/// Minimal HTTP/1.1 JSON client for local inference endpoints.
pub struct HttpTextClient {
    endpoint: String,
    token: Option<String>,
    timeout: Duration,
}

impl HttpTextClient {
    pub fn new(endpoint: &str, token: Option<String>) -> Self {
        HttpTextClient {
            endpoint: endpoint.to_string(),
            token,
            timeout: Duration::from_secs(60),
        }
    }

    /// Build from `OPTIFORGE_LLM_ENDPOINT` / `OPTIFORGE_LLM_TOKEN`.
    pub fn from_env() -> Result<Self> {
        let endpoint = std::env::var(ENDPOINT_ENV).map_err(|_| Error::Transport {
            endpoint: ENDPOINT_ENV.into(),
            detail: "environment variable not set".into(),
        })?;
        Ok(Self::new(&endpoint, std::env::var(TOKEN_ENV).ok()))
    }

    fn parse_endpoint(&self) -> Result<(String, String, String)> {
        let rest = self
            .endpoint
            .strip_prefix("http://")
            .ok_or_else(|| Error::Transport {
                endpoint: self.endpoint.clone(),
                detail: "only http:// endpoints are supported; put TLS behind a local proxy".into(),
            })?;
        let (hostport, path) = match rest.split_once('/') {
            Some((h, p)) => (h.to_string(), format!("/{p}")),
            None => (rest.to_string(), "/".to_string()),
        };
        let host = hostport.split(':').next().unwrap_or(&hostport).to_string();
        let addr = if hostport.contains(':') {
            hostport
        } else {
            format!("{hostport}:80")
        };
        Ok((addr, host, path))
    }
}

impl TextClient for HttpTextClient {
    fn complete(&self, prompt: &str) -> Result<String> {
        let (addr, host, path) = self.parse_endpoint()?;
        let body = serde_json::json!({ "prompt": prompt }).to_string();
        let mut request = format!(
            "POST {path} HTTP/1.1\r\nHost: {host}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n",
            body.len()
        );
        if let Some(token) = &self.token {
            request.push_str(&format!("Authorization: Bearer {token}\r\n"));
        }
        request.push_str("\r\n");
        request.push_str(&body);

        let transport_err = |detail: String| Error::Transport {
            endpoint: self.endpoint.clone(),
            detail,
        };
        let mut stream =
            TcpStream::connect(&addr).map_err(|e| transport_err(format!("connect: {e}")))?;
        stream.set_read_timeout(Some(self.timeout)).ok();
        stream.set_write_timeout(Some(self.timeout)).ok();
        stream
            .write_all(request.as_bytes())
            .map_err(|e| transport_err(format!("write: {e}")))?;
        let mut raw = Vec::new();
        stream
            .read_to_end(&mut raw)
            .map_err(|e| transport_err(format!("read: {e}")))?;
        let text = String::from_utf8_lossy(&raw);
        let (head, payload) = text
            .split_once("\r\n\r\n")
            .ok_or_else(|| transport_err("malformed http response".into()))?;
        let status = head.lines().next().unwrap_or_default();
        if !status.contains("200") {
            return Err(transport_err(format!("http status: {status}")));
        }
        let value: serde_json::Value = serde_json::from_str(payload.trim())
            .map_err(|e| transport_err(format!("bad json body: {e}")))?;
        value
            .get("text")
            .and_then(|t| t.as_str())
            .map(|s| s.to_string())
            .ok_or_else(|| transport_err("response missing `text` field".into()))
    }

    fn endpoint(&self) -> String {
        self.endpoint.clone()
    }
}

/// Ask an external generator for a description of `w`, verifying each
/// candidate and retrying failures up to [`RETRY_CAP`] times.
pub fn generate_description_external(
    w: &WorldDescriptor,
    client: &dyn TextClient,
) -> Result<Description> {
    let prompt = format!(
        "Write a complete natural-language description of this optimization problem. \
         State every coefficient, bound, and constraint explicitly, and name the \
         objective sense. Problem data: {}",
        serde_json::to_string(&w.formulation).unwrap_or_default()
    );
    for attempt in 0..RETRY_CAP {
        let text = client.complete(&prompt)?;
        let candidate = Description {
            text,
            manifest: Default::default(),
            style: StyleTag {
                scenario: w.metadata.scenario.clone(),
                variant: attempt as u64,
            },
        };
        if verify_description(&candidate, w).pass() {
            return Ok(candidate);
        }
    }
    Err(Error::RetryCapExceeded(RETRY_CAP))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::describe::{render_description, split_sentences};
    use crate::fixtures;

    struct EchoClient {
        text: String,
    }

    impl TextClient for EchoClient {
        fn complete(&self, _prompt: &str) -> Result<String> {
            Ok(self.text.clone())
        }
    }

    struct FailingClient;

    impl TextClient for FailingClient {
        fn complete(&self, _prompt: &str) -> Result<String> {
            Err(Error::Transport {
                endpoint: "mock://down".into(),
                detail: "unreachable".into(),
            })
        }
    }

    #[test]
    fn echo_of_rendered_text_passes() {
        let w = fixtures::farming_lp();
        let text = render_description(&w, 0).unwrap().text;
        let d = generate_description_external(&w, &EchoClient { text }).unwrap();
        assert!(d.manifest.is_empty());
    }

    #[test]
    fn dropped_constraint_sentence_exhausts_retries() {
        let w = fixtures::farming_lp();
        let full = render_description(&w, 0).unwrap();
        let filtered: Vec<String> = split_sentences(&full.text)
            .into_iter()
            .filter(|s| !s.contains("100000"))
            .collect();
        let client = EchoClient {
            text: filtered.join(" "),
        };
        assert!(matches!(
            generate_description_external(&w, &client),
            Err(Error::RetryCapExceeded(_))
        ));
    }

    #[test]
    fn transport_error_carries_endpoint() {
        let w = fixtures::farming_lp();
        match generate_description_external(&w, &FailingClient) {
            Err(Error::Transport { endpoint, .. }) => assert_eq!(endpoint, "mock://down"),
            other => panic!("expected transport error, got {other:?}"),
        }
    }

    #[test]
    fn https_endpoint_rejected_with_guidance() {
        let client = HttpTextClient::new("https://example.com/v1", None);
        match client.complete("hi") {
            Err(Error::Transport { detail, .. }) => assert!(detail.contains("proxy")),
            other => panic!("expected transport error, got {other:?}"),
        }
    }
}
