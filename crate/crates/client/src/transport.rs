use std::future::Future;

use serde::{Deserialize, Serialize};

use crate::config::SamplingParams;
use crate::error::TransportError;

/// One chat message. Annotation and inference both send a single user
/// message; the role field exists for servers that require alternation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub role: String,
    pub content: String,
}

impl Message {
    pub fn user(content: impl Into<String>) -> Self {
        Message { role: "user".into(), content: content.into() }
    }
}

/// A completed chat call: the continuation text plus token usage.
#[derive(Debug, Clone, PartialEq)]
pub struct ChatOutput {
    pub text: String,
    pub prompt_tokens: u32,
    pub completion_tokens: u32,
}

/// Anything that can complete a chat prompt and teacher-force-score a
/// continuation. `score` returns one negative log probability per target
/// token, covering exactly the `target` span given `context` before it.
pub trait ChatTransport: Send + Sync {
    fn chat(
        &self,
        messages: &[Message],
        sampling: &SamplingParams,
    ) -> impl Future<Output = Result<ChatOutput, TransportError>> + Send;

    fn score(
        &self,
        context: &str,
        target: &str,
    ) -> impl Future<Output = Result<Vec<f64>, TransportError>> + Send;
}

pub(crate) fn last_user_content(messages: &[Message]) -> &str {
    messages
        .iter()
        .rev()
        .find(|m| m.role == "user")
        .map(|m| m.content.as_str())
        .unwrap_or("")
}
