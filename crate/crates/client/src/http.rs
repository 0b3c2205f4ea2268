use reqwest::StatusCode;

use crate::config::{SamplingParams, ServerConfig};
use crate::error::TransportError;
use crate::transport::{ChatOutput, ChatTransport, Message};
use crate::wire::{
    select_target_nlls, ChatCompletionRequest, ChatCompletionResponse, ScoreCompletionRequest,
    ScoreCompletionResponse,
};

/// Client for a chat-completions HTTP server.
///
/// The API key is read once from the environment variable named in the
/// config. An unset variable is an error; an empty value means the
/// server needs no Authorization header (local deployments).
pub struct HttpTransport {
    http: reqwest::Client,
    config: ServerConfig,
    api_key: Option<String>,
}

impl HttpTransport {
    pub fn new(config: ServerConfig) -> Result<Self, TransportError> {
        config.validate()?;
        let key = std::env::var(&config.api_key_env)
            .map_err(|_| TransportError::MissingKey { env: config.api_key_env.clone() })?;
        let api_key = if key.is_empty() { None } else { Some(key) };
        let http = reqwest::Client::builder()
            .timeout(config.timeout())
            .build()
            .map_err(|e| TransportError::Config(format!("cannot build HTTP client: {e}")))?;
        Ok(HttpTransport { http, config, api_key })
    }

    pub fn config(&self) -> &ServerConfig {
        &self.config
    }

    fn endpoint(&self, path: &str) -> String {
        format!("{}{path}", self.config.base_url.trim_end_matches('/'))
    }

    async fn post_json<T: serde::de::DeserializeOwned>(
        &self,
        url: &str,
        body: &impl serde::Serialize,
    ) -> Result<T, TransportError> {
        let mut request = self.http.post(url).json(body);
        if let Some(key) = &self.api_key {
            request = request.bearer_auth(key);
        }
        let response = request
            .send()
            .await
            .map_err(|e| TransportError::Network { message: e.to_string() })?;
        let status = response.status();
        if status == StatusCode::UNAUTHORIZED || status == StatusCode::FORBIDDEN {
            return Err(TransportError::Auth {
                status: status.as_u16(),
                env: self.config.api_key_env.clone(),
            });
        }
        if !status.is_success() {
            let mut message = response.text().await.unwrap_or_default();
            message.truncate(200);
            return Err(TransportError::Status { status: status.as_u16(), message });
        }
        response
            .json::<T>()
            .await
            .map_err(|e| TransportError::Protocol(e.to_string()))
    }
}

impl ChatTransport for HttpTransport {
    async fn chat(
        &self,
        messages: &[Message],
        sampling: &SamplingParams,
    ) -> Result<ChatOutput, TransportError> {
        sampling.validate()?;
        let url = self.endpoint("/v1/chat/completions");
        let body = ChatCompletionRequest::new(&self.config.model, messages, sampling);
        let parsed: ChatCompletionResponse = self.post_json(&url, &body).await?;
        let choice = parsed
            .choices
            .into_iter()
            .next()
            .ok_or_else(|| TransportError::Protocol("response carries no choices".into()))?;
        let usage = parsed.usage.unwrap_or_default();
        Ok(ChatOutput {
            text: choice.message.content,
            prompt_tokens: usage.prompt_tokens,
            completion_tokens: usage.completion_tokens,
        })
    }

    async fn score(&self, context: &str, target: &str) -> Result<Vec<f64>, TransportError> {
        if target.is_empty() {
            return Err(TransportError::Config("score target is empty".into()));
        }
        let url = self.endpoint("/v1/completions");
        let prompt = format!("{context}{target}");
        let body = ScoreCompletionRequest::new(&self.config.model, &prompt);
        let parsed: ScoreCompletionResponse = self.post_json(&url, &body).await?;
        let choice = parsed
            .choices
            .into_iter()
            .next()
            .ok_or_else(|| TransportError::Protocol("response carries no choices".into()))?;
        let Some(logprobs) = choice.logprobs else {
            return Err(TransportError::Capability { endpoint: url });
        };
        select_target_nlls(&logprobs, context.len(), &url)
    }
}
