//! A scripted chat-completions endpoint for tests and offline campaigns.

use std::collections::BTreeMap;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::sha256_hex;

/// Canned answers. Lookup order: prompt hash, then the first rule whose
/// substring occurs in the prompt, then the default.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MockScript {
    /// SHA-256 (hex) of the prompt to response text.
    #[serde(default)]
    pub by_hash: BTreeMap<String, String>,
    #[serde(default)]
    pub rules: Vec<MockRule>,
    #[serde(default)]
    pub default: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MockRule {
    pub contains: String,
    #[serde(default)]
    pub response: String,
    /// HTTP status to answer with; 200 when absent.
    #[serde(default)]
    pub status: Option<u16>,
}

impl MockScript {
    pub fn load(path: &Path) -> io::Result<Self> {
        let raw = std::fs::read_to_string(path)?;
        serde_json::from_str(&raw).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
    }

    /// Status and body text for a prompt.
    pub fn lookup(&self, prompt: &str) -> (u16, Option<&str>) {
        if let Some(r) = self.by_hash.get(&sha256_hex(prompt)) {
            return (200, Some(r));
        }
        if let Some(rule) = self.rules.iter().find(|r| prompt.contains(&r.contains)) {
            return (rule.status.unwrap_or(200), Some(&rule.response));
        }
        match &self.default {
            Some(d) => (200, Some(d)),
            None => (404, None),
        }
    }
}

/// Serves a [`MockScript`] on a loopback port until dropped.
pub struct MockServer {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    requests: Arc<AtomicUsize>,
    handle: Option<JoinHandle<()>>,
}

impl MockServer {
    pub fn start(script: MockScript) -> io::Result<Self> {
        let listener = TcpListener::bind("127.0.0.1:0")?;
        let addr = listener.local_addr()?;
        let stop = Arc::new(AtomicBool::new(false));
        let requests = Arc::new(AtomicUsize::new(0));
        let script = Arc::new(script);
        let handle = {
            let stop = Arc::clone(&stop);
            let requests = Arc::clone(&requests);
            thread::spawn(move || {
                for stream in listener.incoming() {
                    if stop.load(Ordering::SeqCst) {
                        break;
                    }
                    let Ok(stream) = stream else { continue };
                    let script = Arc::clone(&script);
                    let requests = Arc::clone(&requests);
                    thread::spawn(move || {
                        let _ = serve(stream, &script, &requests);
                    });
                }
            })
        };
        Ok(MockServer { addr, stop, requests, handle: Some(handle) })
    }

    /// Value for `base_url` in a model configuration.
    pub fn base_url(&self) -> String {
        format!("http://{}/v1", self.addr)
    }

    /// Number of requests answered so far.
    pub fn requests(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // Wake the accept loop.
        let _ = TcpStream::connect(self.addr);
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

fn serve(stream: TcpStream, script: &MockScript, requests: &AtomicUsize) -> io::Result<()> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut line = String::new();
    reader.read_line(&mut line)?;
    if line.is_empty() {
        return Ok(());
    }
    let mut content_length = 0usize;
    loop {
        let mut header = String::new();
        if reader.read_line(&mut header)? == 0 || header.trim().is_empty() {
            break;
        }
        if let Some((k, v)) = header.split_once(':') {
            if k.trim().eq_ignore_ascii_case("content-length") {
                content_length = v.trim().parse().unwrap_or(0);
            }
        }
    }
    let mut body = vec![0u8; content_length];
    reader.read_exact(&mut body)?;
    requests.fetch_add(1, Ordering::SeqCst);

    let request: Value = serde_json::from_slice(&body).unwrap_or(Value::Null);
    let prompt = request
        .pointer("/messages")
        .and_then(Value::as_array)
        .and_then(|m| m.iter().rev().find(|m| m["role"] == "user"))
        .and_then(|m| m["content"].as_str())
        .unwrap_or("");
    let (status, text) = if line.starts_with("POST ") && line.contains("/chat/completions") {
        script.lookup(prompt)
    } else {
        (404, None)
    };
    let payload = match (status, text) {
        (200, Some(t)) => json!({
            "id": format!("mock-{}", &sha256_hex(prompt)[..12]),
            "object": "chat.completion",
            "model": request["model"],
            "choices": [{
                "index": 0,
                "message": {"role": "assistant", "content": t},
                "finish_reason": "stop",
            }],
        }),
        (_, t) => json!({"error": {"message": t.unwrap_or("no scripted response")}}),
    }
    .to_string();
    let reason = match status {
        200 => "OK",
        404 => "Not Found",
        _ => "Scripted",
    };
    let mut out = stream;
    write!(
        out,
        "HTTP/1.1 {status} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{payload}",
        payload.len()
    )?;
    out.flush()
}
