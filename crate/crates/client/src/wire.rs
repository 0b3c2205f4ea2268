//! Request and response bodies for the chat-completions protocol.
//!
//! Chat goes to `POST /v1/chat/completions`. Teacher-forced scoring goes
//! to `POST /v1/completions` with `echo=true`, `logprobs`, and
//! `max_tokens=0`, which returns per-token log probabilities for the
//! prompt itself; the target's tokens are selected by byte offset.

use serde::{Deserialize, Serialize};

use crate::config::SamplingParams;
use crate::error::TransportError;
use crate::transport::Message;

#[derive(Debug, Serialize)]
pub struct ChatCompletionRequest<'a> {
    pub model: &'a str,
    pub messages: &'a [Message],
    pub temperature: f64,
    pub top_p: f64,
    pub max_tokens: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl<'a> ChatCompletionRequest<'a> {
    pub fn new(model: &'a str, messages: &'a [Message], sampling: &SamplingParams) -> Self {
        ChatCompletionRequest {
            model,
            messages,
            temperature: sampling.temperature,
            top_p: sampling.top_p,
            max_tokens: sampling.max_tokens,
            seed: sampling.seed,
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct ChatCompletionResponse {
    pub choices: Vec<ChatChoice>,
    #[serde(default)]
    pub usage: Option<Usage>,
}

#[derive(Debug, Deserialize)]
pub struct ChatChoice {
    pub message: ChoiceMessage,
}

#[derive(Debug, Deserialize)]
pub struct ChoiceMessage {
    pub content: String,
}

#[derive(Debug, Default, Deserialize)]
pub struct Usage {
    #[serde(default)]
    pub prompt_tokens: u32,
    #[serde(default)]
    pub completion_tokens: u32,
}

#[derive(Debug, Serialize)]
pub struct ScoreCompletionRequest<'a> {
    pub model: &'a str,
    pub prompt: &'a str,
    pub max_tokens: u32,
    pub echo: bool,
    pub logprobs: u32,
    pub temperature: f64,
}

impl<'a> ScoreCompletionRequest<'a> {
    pub fn new(model: &'a str, prompt: &'a str) -> Self {
        ScoreCompletionRequest {
            model,
            prompt,
            max_tokens: 0,
            echo: true,
            logprobs: 0,
            temperature: 0.0,
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct ScoreCompletionResponse {
    pub choices: Vec<ScoreChoice>,
}

#[derive(Debug, Deserialize)]
pub struct ScoreChoice {
    #[serde(default)]
    pub logprobs: Option<Logprobs>,
}

#[derive(Debug, Deserialize)]
pub struct Logprobs {
    pub tokens: Vec<String>,
    pub token_logprobs: Vec<Option<f64>>,
    pub text_offset: Vec<usize>,
}

/// Negative log probabilities for the tokens lying at or after
/// `context_len` bytes, i.e. the target span of an echoed prompt.
pub fn select_target_nlls(
    logprobs: &Logprobs,
    context_len: usize,
    endpoint: &str,
) -> Result<Vec<f64>, TransportError> {
    if logprobs.token_logprobs.len() != logprobs.text_offset.len()
        || logprobs.tokens.len() != logprobs.text_offset.len()
    {
        return Err(TransportError::Protocol(format!(
            "misaligned logprob arrays: {} tokens, {} token_logprobs, {} text_offset",
            logprobs.tokens.len(),
            logprobs.token_logprobs.len(),
            logprobs.text_offset.len()
        )));
    }
    let mut nlls = Vec::new();
    for (i, (&offset, lp)) in
        logprobs.text_offset.iter().zip(&logprobs.token_logprobs).enumerate()
    {
        if offset < context_len {
            continue;
        }
        let Some(lp) = lp else {
            return Err(TransportError::Protocol(format!(
                "token {i} (offset {offset}) inside the target has a null logprob"
            )));
        };
        nlls.push(-lp);
    }
    if nlls.is_empty() {
        return Err(TransportError::Protocol(format!(
            "no tokens at or after byte {context_len}; {endpoint} echoed too little text"
        )));
    }
    Ok(nlls)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chat_request_uses_the_documented_field_names() {
        let messages = vec![Message::user("hello")];
        let sampling = SamplingParams { seed: Some(7), ..Default::default() };
        let request = ChatCompletionRequest::new("test-model", &messages, &sampling);
        let json = serde_json::to_value(&request).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "model": "test-model",
                "messages": [{"role": "user", "content": "hello"}],
                "temperature": 0.7,
                "top_p": 0.9,
                "max_tokens": 1024,
                "seed": 7
            })
        );
    }

    #[test]
    fn seedless_requests_omit_the_seed_field() {
        let messages = vec![Message::user("x")];
        let request =
            ChatCompletionRequest::new("m", &messages, &SamplingParams::default());
        let json = serde_json::to_value(&request).unwrap();
        assert!(json.get("seed").is_none());
    }

    #[test]
    fn score_request_echoes_with_zero_new_tokens() {
        let request = ScoreCompletionRequest::new("m", "ctx target");
        let json = serde_json::to_value(&request).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "model": "m",
                "prompt": "ctx target",
                "max_tokens": 0,
                "echo": true,
                "logprobs": 0,
                "temperature": 0.0
            })
        );
    }

    #[test]
    fn chat_response_parses_the_recorded_shape() {
        let raw = r#"{
            "id": "cmpl-1", "object": "chat.completion", "created": 1,
            "model": "test-model",
            "choices": [{"index": 0, "message": {"role": "assistant", "content": "hi"},
                         "finish_reason": "stop"}],
            "usage": {"prompt_tokens": 12, "completion_tokens": 3, "total_tokens": 15}
        }"#;
        let parsed: ChatCompletionResponse = serde_json::from_str(raw).unwrap();
        assert_eq!(parsed.choices[0].message.content, "hi");
        assert_eq!(parsed.usage.as_ref().unwrap().prompt_tokens, 12);
        assert_eq!(parsed.usage.as_ref().unwrap().completion_tokens, 3);
    }

    #[test]
    fn target_tokens_are_selected_by_byte_offset() {
        // Prompt "AB CD": context "AB ", target "CD".
        let logprobs = Logprobs {
            tokens: vec!["AB".into(), " ".into(), "C".into(), "D".into()],
            token_logprobs: vec![None, Some(-0.9), Some(-0.5), Some(-0.25)],
            text_offset: vec![0, 2, 3, 4],
        };
        let nlls = select_target_nlls(&logprobs, 3, "/v1/completions").unwrap();
        assert_eq!(nlls, vec![0.5, 0.25]);
    }

    #[test]
    fn null_logprob_inside_the_target_is_an_error() {
        let logprobs = Logprobs {
            tokens: vec!["A".into(), "B".into()],
            token_logprobs: vec![None, None],
            text_offset: vec![0, 1],
        };
        let err = select_target_nlls(&logprobs, 1, "x").unwrap_err();
        assert!(err.to_string().contains("null logprob"), "{err}");
    }

    #[test]
    fn empty_selection_is_an_error() {
        let logprobs = Logprobs {
            tokens: vec!["A".into()],
            token_logprobs: vec![Some(-0.1)],
            text_offset: vec![0],
        };
        assert!(select_target_nlls(&logprobs, 10, "x").is_err());
    }
}
