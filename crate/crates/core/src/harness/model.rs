use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use ureq::Agent;

/// Anything that turns a prompt into a completion.
pub trait ChatModel: Sync {
    fn complete(&self, prompt: &str) -> Result<String, ModelError>;
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("authentication failed: {0}")]
    Auth(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("malformed response: {0}")]
    BadResponse(String),
    #[error("invalid endpoint configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelEndpointConfig {
    /// Base of an OpenAI-compatible API, e.g. `http://localhost:8000/v1`.
    pub base_url: String,
    pub model_name: String,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
    /// Name of the environment variable holding the bearer token.
    #[serde(default)]
    pub auth: Option<String>,
    #[serde(default = "default_request_timeout")]
    pub request_timeout: f64,
    #[serde(default = "default_concurrency")]
    pub max_concurrency: usize,
    /// Delay before the first retry; doubles after each failure.
    #[serde(default = "default_backoff")]
    pub backoff_ms: u64,
}

fn default_max_tokens() -> u32 {
    1024
}
fn default_request_timeout() -> f64 {
    120.0
}
fn default_concurrency() -> usize {
    1
}
fn default_backoff() -> u64 {
    500
}

impl ModelEndpointConfig {
    pub fn new(base_url: impl Into<String>, model_name: impl Into<String>) -> Self {
        ModelEndpointConfig {
            base_url: base_url.into(),
            model_name: model_name.into(),
            temperature: 0.0,
            max_tokens: default_max_tokens(),
            auth: None,
            request_timeout: default_request_timeout(),
            max_concurrency: default_concurrency(),
            backoff_ms: default_backoff(),
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.temperature != 0.0 {
            return Err(ModelError::Config(format!("temperature must be 0, got {}", self.temperature)));
        }
        if self.max_concurrency == 0 {
            return Err(ModelError::Config("max_concurrency must be at least 1".into()));
        }
        if !(self.request_timeout > 0.0) {
            return Err(ModelError::Config("request_timeout must be positive".into()));
        }
        Ok(())
    }
}

pub const MAX_ATTEMPTS: u32 = 3;

/// Chat-completions client over plain HTTP(S).
pub struct HttpModel {
    config: ModelEndpointConfig,
    agent: Agent,
    token: Option<String>,
}

impl HttpModel {
    pub fn new(config: ModelEndpointConfig) -> Result<Self, ModelError> {
        config.validate()?;
        let token = match &config.auth {
            Some(var) => Some(
                std::env::var(var).map_err(|_| ModelError::Auth(format!("environment variable {var} is not set")))?,
            ),
            None => None,
        };
        let agent: Agent = Agent::config_builder()
            .timeout_global(Some(Duration::from_secs_f64(config.request_timeout)))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(HttpModel { config, agent, token })
    }

    pub fn config(&self) -> &ModelEndpointConfig {
        &self.config
    }

    fn url(&self) -> String {
        format!("{}/chat/completions", self.config.base_url.trim_end_matches('/'))
    }

    fn request_body(&self, prompt: &str) -> String {
        json!({
            "model": self.config.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
            "max_tokens": self.config.max_tokens,
        })
        .to_string()
    }

    /// One round trip. `Ok(Err(..))` marks a failure worth retrying.
    fn send_once(&self, body: &str) -> Result<Result<String, String>, ModelError> {
        let mut req = self.agent.post(&self.url()).header("Content-Type", "application/json");
        if let Some(token) = &self.token {
            req = req.header("Authorization", &format!("Bearer {token}"));
        }
        let mut resp = match req.send(body) {
            Ok(r) => r,
            Err(e) => return Ok(Err(e.to_string())),
        };
        let status = resp.status().as_u16();
        let text = match resp.body_mut().read_to_string() {
            Ok(t) => t,
            Err(e) => return Ok(Err(e.to_string())),
        };
        match status {
            200..=299 => parse_completion(&text).map(Ok),
            401 | 403 => Err(ModelError::Auth(format!("HTTP {status}"))),
            408 | 429 | 500..=599 => Ok(Err(format!("HTTP {status}"))),
            _ => Err(ModelError::Transport(format!("HTTP {status}: {}", truncate(&text, 200)))),
        }
    }
}

fn truncate(s: &str, n: usize) -> &str {
    match s.char_indices().nth(n) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}

fn parse_completion(text: &str) -> Result<String, ModelError> {
    let v: Value = serde_json::from_str(text).map_err(|e| ModelError::BadResponse(e.to_string()))?;
    v.pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| ModelError::BadResponse("no choices[0].message.content".into()))
}

impl ChatModel for HttpModel {
    fn complete(&self, prompt: &str) -> Result<String, ModelError> {
        let body = self.request_body(prompt);
        let mut delay = Duration::from_millis(self.config.backoff_ms);
        let mut last = String::new();
        for attempt in 1..=MAX_ATTEMPTS {
            match self.send_once(&body)? {
                Ok(text) => return Ok(text),
                Err(e) => last = e,
            }
            if attempt < MAX_ATTEMPTS {
                thread::sleep(delay);
                delay *= 2;
            }
        }
        Err(ModelError::Transport(format!("{last} (after {MAX_ATTEMPTS} attempts)")))
    }
}
