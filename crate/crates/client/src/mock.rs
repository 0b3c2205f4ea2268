//! In-process scripted transport for tests and offline pipelines.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use crate::config::SamplingParams;
use crate::error::TransportError;
use crate::transport::{last_user_content, ChatOutput, ChatTransport, Message};

/// What a scripted chat call does.
#[derive(Debug, Clone)]
pub enum MockOutcome {
    Text(String),
    Fail { status: u16 },
    NetworkFail,
    AuthFail,
}

/// A scripted reply: outcome plus a virtual delay before it lands.
/// Delays reorder completions under concurrency (with a paused tokio
/// clock they are deterministic), which is how out-of-order delivery is
/// simulated.
#[derive(Debug, Clone)]
pub struct MockReply {
    pub outcome: MockOutcome,
    pub delay: Duration,
}

impl MockReply {
    pub fn text(text: impl Into<String>) -> Self {
        MockReply { outcome: MockOutcome::Text(text.into()), delay: Duration::ZERO }
    }

    pub fn after_ms(mut self, ms: u64) -> Self {
        self.delay = Duration::from_millis(ms);
        self
    }

    pub fn status(status: u16) -> Self {
        MockReply { outcome: MockOutcome::Fail { status }, delay: Duration::ZERO }
    }
}

type ChatRule = dyn Fn(&str, u32) -> MockReply + Send + Sync;
type ScoreRule = dyn Fn(&str, &str) -> Result<Vec<f64>, TransportError> + Send + Sync;

/// Scripted transport. The chat rule receives the last user message and
/// the 1-based attempt number for that exact message, so scripts can
/// fail a request N times and then succeed. Every received prompt is
/// recorded in arrival order.
pub struct MockTransport {
    chat_rule: Box<ChatRule>,
    score_rule: Box<ScoreRule>,
    attempts: Mutex<HashMap<String, u32>>,
    received: Mutex<Vec<String>>,
    chat_calls: AtomicU32,
    score_calls: AtomicU32,
}

impl MockTransport {
    pub fn scripted(rule: impl Fn(&str, u32) -> MockReply + Send + Sync + 'static) -> Self {
        MockTransport {
            chat_rule: Box::new(rule),
            score_rule: Box::new(|_, _| {
                Err(TransportError::Capability { endpoint: "mock".into() })
            }),
            attempts: Mutex::new(HashMap::new()),
            received: Mutex::new(Vec::new()),
            chat_calls: AtomicU32::new(0),
            score_calls: AtomicU32::new(0),
        }
    }

    /// Replies to every prompt with `reply(prompt)` on the first attempt.
    pub fn returning(reply: impl Fn(&str) -> String + Send + Sync + 'static) -> Self {
        MockTransport::scripted(move |prompt, _| MockReply::text(reply(prompt)))
    }

    /// Installs a scoring rule returning per-token NLLs for (context, target).
    pub fn with_score(
        mut self,
        rule: impl Fn(&str, &str) -> Result<Vec<f64>, TransportError> + Send + Sync + 'static,
    ) -> Self {
        self.score_rule = Box::new(rule);
        self
    }

    /// Scoring rule whose NLL for each character token depends only on
    /// its absolute byte position: nll(i) = (i mod 16) / 16. Dyadic
    /// values make cross-split sums exactly equal, which the additivity
    /// tests rely on.
    pub fn positional_score(self) -> Self {
        self.with_score(|context, target| {
            if target.is_empty() {
                return Err(TransportError::Config("score target is empty".into()));
            }
            let start = context.len();
            Ok(target
                .as_bytes()
                .iter()
                .enumerate()
                .map(|(i, _)| ((start + i) % 16) as f64 / 16.0)
                .collect())
        })
    }

    pub fn chat_count(&self) -> u32 {
        self.chat_calls.load(Ordering::SeqCst)
    }

    pub fn score_count(&self) -> u32 {
        self.score_calls.load(Ordering::SeqCst)
    }

    /// Every chat prompt received so far, in arrival order.
    pub fn received_prompts(&self) -> Vec<String> {
        self.received.lock().expect("mock lock").clone()
    }
}

impl ChatTransport for MockTransport {
    async fn chat(
        &self,
        messages: &[Message],
        _sampling: &SamplingParams,
    ) -> Result<ChatOutput, TransportError> {
        let prompt = last_user_content(messages).to_string();
        self.chat_calls.fetch_add(1, Ordering::SeqCst);
        let attempt = {
            let mut attempts = self.attempts.lock().expect("mock lock");
            let n = attempts.entry(prompt.clone()).or_insert(0);
            *n += 1;
            *n
        };
        self.received.lock().expect("mock lock").push(prompt.clone());
        let reply = (self.chat_rule)(&prompt, attempt);
        if !reply.delay.is_zero() {
            tokio::time::sleep(reply.delay).await;
        }
        match reply.outcome {
            MockOutcome::Text(text) => Ok(ChatOutput {
                prompt_tokens: prompt.split_whitespace().count() as u32,
                completion_tokens: text.split_whitespace().count() as u32,
                text,
            }),
            MockOutcome::Fail { status } => {
                Err(TransportError::Status { status, message: "scripted failure".into() })
            }
            MockOutcome::NetworkFail => {
                Err(TransportError::Network { message: "scripted network failure".into() })
            }
            MockOutcome::AuthFail => {
                Err(TransportError::Auth { status: 401, env: "MODEL_API_KEY".into() })
            }
        }
    }

    async fn score(&self, context: &str, target: &str) -> Result<Vec<f64>, TransportError> {
        self.score_calls.fetch_add(1, Ordering::SeqCst);
        (self.score_rule)(context, target)
    }
}
