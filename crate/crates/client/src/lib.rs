//! Transport layer for talking to chat-completions model servers:
//! typed request/response bodies, a retrying HTTP client, and two
//! offline transports (a scripted in-process mock and a fixture
//! directory) that let every pipeline run without a network.

mod config;
mod error;
mod fixture;
mod http;
mod mock;
mod retry;
mod transport;
mod wire;

pub use config::{SamplingParams, ServerConfig, DEFAULT_API_KEY_ENV};
pub use error::TransportError;
pub use fixture::{chat_key, fixture_key, read_calls_log, score_key, FixtureTransport};
pub use http::HttpTransport;
pub use mock::{MockOutcome, MockReply, MockTransport};
pub use retry::{with_retries, Attempted, RetryPolicy};
pub use transport::{ChatOutput, ChatTransport, Message};

/// Statically dispatched transport choice for binaries that pick between
/// a live server and a fixture directory at startup.
pub enum AnyTransport {
    Http(HttpTransport),
    Fixture(FixtureTransport),
}

impl ChatTransport for AnyTransport {
    async fn chat(
        &self,
        messages: &[Message],
        sampling: &SamplingParams,
    ) -> Result<ChatOutput, TransportError> {
        match self {
            AnyTransport::Http(t) => t.chat(messages, sampling).await,
            AnyTransport::Fixture(t) => t.chat(messages, sampling).await,
        }
    }

    async fn score(&self, context: &str, target: &str) -> Result<Vec<f64>, TransportError> {
        match self {
            AnyTransport::Http(t) => t.score(context, target).await,
            AnyTransport::Fixture(t) => t.score(context, target).await,
        }
    }
}
