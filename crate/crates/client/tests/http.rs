//! Drives HttpTransport against a minimal in-process HTTP server to pin
//! the on-the-wire request shape and response handling.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use codeplan_client::{ChatTransport, HttpTransport, Message, SamplingParams, ServerConfig, TransportError};

#[derive(Debug, Clone)]
struct Captured {
    path: String,
    auth: Option<String>,
    body: serde_json::Value,
}

struct TestServer {
    base_url: String,
    captured: Arc<Mutex<Vec<Captured>>>,
}

/// Serves the scripted (status, body) responses one connection each,
/// capturing each request, then exits.
fn spawn_server(responses: Vec<(u16, String)>) -> TestServer {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind test server");
    let base_url = format!("http://{}", listener.local_addr().unwrap());
    let captured: Arc<Mutex<Vec<Captured>>> = Arc::new(Mutex::new(Vec::new()));
    let sink = Arc::clone(&captured);
    thread::spawn(move || {
        for (status, body) in responses {
            let Ok((stream, _)) = listener.accept() else { return };
            stream.set_read_timeout(Some(Duration::from_secs(5))).ok();
            let mut reader = BufReader::new(stream);
            let mut request_line = String::new();
            if reader.read_line(&mut request_line).is_err() {
                return;
            }
            let path = request_line.split_whitespace().nth(1).unwrap_or("").to_string();
            let mut auth = None;
            let mut content_length = 0usize;
            loop {
                let mut line = String::new();
                if reader.read_line(&mut line).is_err() || line == "\r\n" || line.is_empty() {
                    break;
                }
                let lower = line.to_ascii_lowercase();
                if let Some(value) = lower.strip_prefix("content-length:") {
                    content_length = value.trim().parse().unwrap_or(0);
                }
                if lower.starts_with("authorization:") {
                    auth = Some(line["authorization:".len()..].trim().to_string());
                }
            }
            let mut raw = vec![0u8; content_length];
            reader.read_exact(&mut raw).expect("read body");
            let body_json = serde_json::from_slice(&raw).unwrap_or(serde_json::Value::Null);
            sink.lock().unwrap().push(Captured { path, auth, body: body_json });
            let reply = format!(
                "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            );
            reader.into_inner().write_all(reply.as_bytes()).expect("write reply");
        }
    });
    TestServer { base_url, captured }
}

fn transport_for(server: &TestServer, env: &str) -> HttpTransport {
    std::env::set_var(env, "test-key");
    let mut config = ServerConfig::new(server.base_url.clone(), "test-model");
    config.api_key_env = env.to_string();
    config.timeout_secs = 5;
    HttpTransport::new(config).unwrap()
}

#[tokio::test]
async fn chat_round_trip_sends_the_documented_body_and_bearer_key() {
    let reply = serde_json::json!({
        "choices": [{"index": 0, "message": {"role": "assistant", "content": "the plan"},
                     "finish_reason": "stop"}],
        "usage": {"prompt_tokens": 11, "completion_tokens": 4, "total_tokens": 15}
    });
    let server = spawn_server(vec![(200, reply.to_string())]);
    let transport = transport_for(&server, "TEST_KEY_CHAT_RT");
    let sampling = SamplingParams { seed: Some(3), ..Default::default() };
    let out = transport.chat(&[Message::user("annotate this")], &sampling).await.unwrap();
    assert_eq!(out.text, "the plan");
    assert_eq!(out.prompt_tokens, 11);
    assert_eq!(out.completion_tokens, 4);

    let captured = server.captured.lock().unwrap();
    assert_eq!(captured.len(), 1);
    assert_eq!(captured[0].path, "/v1/chat/completions");
    assert_eq!(captured[0].auth.as_deref(), Some("Bearer test-key"));
    assert_eq!(
        captured[0].body,
        serde_json::json!({
            "model": "test-model",
            "messages": [{"role": "user", "content": "annotate this"}],
            "temperature": 0.7,
            "top_p": 0.9,
            "max_tokens": 1024,
            "seed": 3
        })
    );
}

#[tokio::test]
async fn score_selects_target_tokens_by_offset() {
    // Context "AB " (3 bytes), target "CD".
    let reply = serde_json::json!({
        "choices": [{"text": "AB CD", "logprobs": {
            "tokens": ["AB", " C", "D"],
            "token_logprobs": [null, -0.75, -0.25],
            "text_offset": [0, 2, 4]
        }}]
    });
    let server = spawn_server(vec![(200, reply.to_string())]);
    let transport = transport_for(&server, "TEST_KEY_SCORE_RT");
    // " C" starts at byte 2 < 3, so only "D" (offset 4) is the target's.
    let nlls = transport.score("AB ", "CD").await.unwrap();
    assert_eq!(nlls, vec![0.25]);

    let captured = server.captured.lock().unwrap();
    assert_eq!(captured[0].path, "/v1/completions");
    assert_eq!(
        captured[0].body,
        serde_json::json!({
            "model": "test-model",
            "prompt": "AB CD",
            "max_tokens": 0,
            "echo": true,
            "logprobs": 0,
            "temperature": 0.0
        })
    );
}

#[tokio::test]
async fn missing_logprobs_is_a_capability_error_naming_the_endpoint() {
    let reply = serde_json::json!({"choices": [{"text": "AB"}]});
    let server = spawn_server(vec![(200, reply.to_string())]);
    let transport = transport_for(&server, "TEST_KEY_CAP");
    let err = transport.score("A", "B").await.unwrap_err();
    match &err {
        TransportError::Capability { endpoint } => {
            assert!(endpoint.ends_with("/v1/completions"), "{endpoint}");
        }
        other => panic!("expected capability error, got {other:?}"),
    }
}

#[tokio::test]
async fn auth_rejection_names_the_env_var() {
    let server = spawn_server(vec![(401, "{}".to_string())]);
    let transport = transport_for(&server, "TEST_KEY_AUTH");
    let err =
        transport.chat(&[Message::user("x")], &SamplingParams::default()).await.unwrap_err();
    match &err {
        TransportError::Auth { status, env } => {
            assert_eq!(*status, 401);
            assert_eq!(env, "TEST_KEY_AUTH");
            assert!(err.is_fatal());
        }
        other => panic!("expected auth error, got {other:?}"),
    }
}

#[tokio::test]
async fn server_errors_surface_status_and_are_retryable() {
    let server = spawn_server(vec![(503, "overloaded".to_string())]);
    let transport = transport_for(&server, "TEST_KEY_STATUS");
    let err =
        transport.chat(&[Message::user("x")], &SamplingParams::default()).await.unwrap_err();
    match &err {
        TransportError::Status { status, message } => {
            assert_eq!(*status, 503);
            assert_eq!(message, "overloaded");
            assert!(err.is_retryable());
        }
        other => panic!("expected status error, got {other:?}"),
    }
}

#[tokio::test]
async fn unset_key_variable_fails_construction() {
    let mut config = ServerConfig::new("http://127.0.0.1:1", "m");
    config.api_key_env = "TEST_KEY_DEFINITELY_UNSET_XYZ".to_string();
    match HttpTransport::new(config) {
        Err(TransportError::MissingKey { env }) => {
            assert_eq!(env, "TEST_KEY_DEFINITELY_UNSET_XYZ");
        }
        Err(other) => panic!("expected missing-key error, got {other:?}"),
        Ok(_) => panic!("expected missing-key error, got a transport"),
    }
}

#[tokio::test]
async fn empty_key_means_no_authorization_header() {
    let reply = serde_json::json!({
        "choices": [{"message": {"role": "assistant", "content": "ok"}}]
    });
    let server = spawn_server(vec![(200, reply.to_string())]);
    std::env::set_var("TEST_KEY_EMPTY", "");
    let mut config = ServerConfig::new(server.base_url.clone(), "m");
    config.api_key_env = "TEST_KEY_EMPTY".to_string();
    let transport = HttpTransport::new(config).unwrap();
    transport.chat(&[Message::user("x")], &SamplingParams::default()).await.unwrap();
    let captured = server.captured.lock().unwrap();
    assert_eq!(captured[0].auth, None);
}
