//! File-backed transport: replies come from a fixture directory instead
//! of a live server, keyed by a hash of the request.
//!
//! Layout inside the directory:
//!   chat-<key>.json    reply for one specific prompt
//!   chat-default.json  fallback for any prompt
//!   score-<key>.json   reply for one specific (context, target)
//!   score-default.json fallback for any score request
//!   calls.log          appended "<kind> <key>" per request (written here)
//!
//! `<key>` is the first 16 hex chars of sha256 over the last user
//! message (chat) or over context and target joined by a 0x1f byte
//! (score). The log makes duplicate-request assertions possible.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::config::SamplingParams;
use crate::error::TransportError;
use crate::transport::{last_user_content, ChatOutput, ChatTransport, Message};

pub struct FixtureTransport {
    dir: PathBuf,
    log: Mutex<()>,
}

#[derive(Deserialize)]
struct ChatFixture {
    text: String,
    #[serde(default)]
    prompt_tokens: Option<u32>,
    #[serde(default)]
    completion_tokens: Option<u32>,
}

#[derive(Deserialize)]
struct ScoreFixture {
    nlls: Vec<f64>,
}

/// First 16 hex chars of sha256.
pub fn fixture_key(payload: &[u8]) -> String {
    let digest = Sha256::digest(payload);
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    hex[..16].to_string()
}

pub fn chat_key(prompt: &str) -> String {
    fixture_key(prompt.as_bytes())
}

pub fn score_key(context: &str, target: &str) -> String {
    let mut payload = Vec::with_capacity(context.len() + target.len() + 1);
    payload.extend_from_slice(context.as_bytes());
    payload.push(0x1f);
    payload.extend_from_slice(target.as_bytes());
    fixture_key(&payload)
}

impl FixtureTransport {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self, TransportError> {
        let dir = dir.into();
        if !dir.is_dir() {
            return Err(TransportError::Config(format!(
                "fixture directory {} does not exist",
                dir.display()
            )));
        }
        Ok(FixtureTransport { dir, log: Mutex::new(()) })
    }

    fn read_reply(&self, kind: &str, key: &str, hint: &str) -> Result<Vec<u8>, TransportError> {
        self.append_log(kind, key)?;
        let specific = self.dir.join(format!("{kind}-{key}.json"));
        let fallback = self.dir.join(format!("{kind}-default.json"));
        let path = if specific.is_file() { specific } else { fallback };
        std::fs::read(&path).map_err(|_| {
            TransportError::Protocol(format!(
                "no fixture {kind}-{key}.json or {kind}-default.json in {} (request starts {hint:?})",
                self.dir.display()
            ))
        })
    }

    fn append_log(&self, kind: &str, key: &str) -> Result<(), TransportError> {
        let _guard = self.log.lock().expect("fixture log lock");
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.dir.join("calls.log"))
            .map_err(|e| TransportError::Config(format!("cannot open calls.log: {e}")))?;
        writeln!(file, "{kind} {key}")
            .map_err(|e| TransportError::Config(format!("cannot write calls.log: {e}")))
    }

    fn head(text: &str) -> String {
        text.chars().take(60).collect()
    }
}

/// The calls.log lines of a fixture directory, oldest first.
pub fn read_calls_log(dir: &Path) -> Vec<String> {
    std::fs::read_to_string(dir.join("calls.log"))
        .map(|text| text.lines().map(str::to_string).collect())
        .unwrap_or_default()
}

impl ChatTransport for FixtureTransport {
    async fn chat(
        &self,
        messages: &[Message],
        _sampling: &SamplingParams,
    ) -> Result<ChatOutput, TransportError> {
        let prompt = last_user_content(messages);
        let key = chat_key(prompt);
        let raw = self.read_reply("chat", &key, &Self::head(prompt))?;
        let fixture: ChatFixture = serde_json::from_slice(&raw)
            .map_err(|e| TransportError::Protocol(format!("bad chat fixture {key}: {e}")))?;
        Ok(ChatOutput {
            prompt_tokens: fixture
                .prompt_tokens
                .unwrap_or(prompt.split_whitespace().count() as u32),
            completion_tokens: fixture
                .completion_tokens
                .unwrap_or(fixture.text.split_whitespace().count() as u32),
            text: fixture.text,
        })
    }

    async fn score(&self, context: &str, target: &str) -> Result<Vec<f64>, TransportError> {
        let key = score_key(context, target);
        let raw = self.read_reply("score", &key, &Self::head(target))?;
        let fixture: ScoreFixture = serde_json::from_slice(&raw)
            .map_err(|e| TransportError::Protocol(format!("bad score fixture {key}: {e}")))?;
        if fixture.nlls.is_empty() {
            return Err(TransportError::Protocol(format!("score fixture {key} has no nlls")));
        }
        Ok(fixture.nlls)
    }
}
