//! Remote chat-completion backend. Sends the rendered prompt to an
//! OpenAI-compatible endpoint with bounded retries and exponential
//! backoff. The API token is read from an environment variable and is
//! never written to disk or logs.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{Backend, BackendError, BackendRequest, BackendResponse};

#[derive(Debug, Clone)]
pub struct RemoteConfig {
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the bearer token.
    pub token_env: String,
    pub max_retries: u32,
    pub initial_backoff_ms: u64,
    pub timeout_ms: u64,
    pub temperature: f64,
}

impl Default for RemoteConfig {
    fn default() -> Self {
        Self {
            endpoint: "https://api.openai.com/v1/chat/completions".into(),
            model: "gpt-4".into(),
            token_env: "SAGENTS_API_TOKEN".into(),
            max_retries: 3,
            initial_backoff_ms: 500,
            timeout_ms: 60_000,
            temperature: 0.0,
        }
    }
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: Vec<ChatMessage<'a>>,
    temperature: f64,
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatResponseMessage,
}

#[derive(Deserialize)]
struct ChatResponseMessage {
    content: String,
}

pub struct RemoteBackend {
    config: RemoteConfig,
    client: reqwest::blocking::Client,
}

impl RemoteBackend {
    pub fn new(config: RemoteConfig) -> Result<Self, BackendError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_millis(config.timeout_ms))
            .build()
            .map_err(|e| BackendError::Unavailable(e.to_string()))?;
        Ok(Self { config, client })
    }

    fn token(&self) -> Result<String, BackendError> {
        std::env::var(&self.config.token_env).map_err(|_| {
            BackendError::Unavailable(format!(
                "environment variable {} is not set",
                self.config.token_env
            ))
        })
    }

    fn attempt(&self, prompt: &str, token: &str) -> Result<String, BackendError> {
        let body = ChatRequest {
            model: &self.config.model,
            messages: vec![ChatMessage { role: "user", content: prompt }],
            temperature: self.config.temperature,
        };
        let response = self
            .client
            .post(&self.config.endpoint)
            .bearer_auth(token)
            .json(&body)
            .send()
            .map_err(|e| BackendError::Unavailable(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(BackendError::Unavailable(format!("http status {status}")));
        }
        let parsed: ChatResponse = response
            .json()
            .map_err(|e| BackendError::Unavailable(format!("bad response body: {e}")))?;
        parsed
            .choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| BackendError::Unavailable("response had no choices".into()))
    }
}

impl Backend for RemoteBackend {
    fn name(&self) -> &str {
        "remote"
    }

    fn complete(&mut self, request: &BackendRequest) -> Result<BackendResponse, BackendError> {
        let token = self.token()?;
        let mut backoff = self.config.initial_backoff_ms;
        let mut last_err = BackendError::Unavailable("no attempts made".into());
        for attempt in 0..=self.config.max_retries {
            match self.attempt(&request.prompt, &token) {
                Ok(text) => return Ok(BackendResponse { text }),
                Err(e) => last_err = e,
            }
            if attempt < self.config.max_retries {
                std::thread::sleep(Duration::from_millis(backoff));
                backoff = backoff.saturating_mul(2);
            }
        }
        Err(last_err)
    }
}
