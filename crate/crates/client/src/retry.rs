use std::future::Future;
use std::time::Duration;

use rand::Rng;

use crate::config::ServerConfig;
use crate::error::TransportError;

/// Exponential backoff schedule: base · 2^(attempt−1), capped at the
/// ceiling, scaled by uniform jitter in [0.5, 1.5).
#[derive(Debug, Clone, PartialEq)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub base: Duration,
    pub ceiling: Duration,
}

impl RetryPolicy {
    pub fn none() -> Self {
        RetryPolicy { max_retries: 0, base: Duration::from_secs(1), ceiling: Duration::from_secs(60) }
    }

    fn delay(&self, attempt: u32) -> Duration {
        let exp = self.base.saturating_mul(2u32.saturating_pow(attempt.saturating_sub(1)));
        let capped = exp.min(self.ceiling);
        capped.mul_f64(rand::rng().random_range(0.5..1.5))
    }
}

impl From<&ServerConfig> for RetryPolicy {
    fn from(config: &ServerConfig) -> Self {
        RetryPolicy {
            max_retries: config.max_retries,
            base: Duration::from_millis(config.backoff_base_ms),
            ceiling: Duration::from_millis(config.backoff_ceiling_ms),
        }
    }
}

/// Outcome of a retried call, with the number of attempts actually made
/// (1 means first try succeeded or the error was permanent).
#[derive(Debug)]
pub struct Attempted<T> {
    pub result: Result<T, TransportError>,
    pub attempts: u32,
}

/// Calls `call` until it succeeds, fails permanently, or exhausts
/// `max_retries` retries. Only retryable errors (network, 429, 5xx) are
/// retried; the attempt number (1-based) is passed through to the call.
pub async fn with_retries<T, F, Fut>(policy: &RetryPolicy, mut call: F) -> Attempted<T>
where
    F: FnMut(u32) -> Fut,
    Fut: Future<Output = Result<T, TransportError>>,
{
    let mut attempt = 0u32;
    loop {
        attempt += 1;
        match call(attempt).await {
            Ok(value) => return Attempted { result: Ok(value), attempts: attempt },
            Err(e) if e.is_retryable() && attempt <= policy.max_retries => {
                let delay = policy.delay(attempt);
                tracing::debug!(attempt, ?delay, error = %e, "retrying after backoff");
                tokio::time::sleep(delay).await;
            }
            Err(e) => return Attempted { result: Err(e), attempts: attempt },
        }
    }
}
