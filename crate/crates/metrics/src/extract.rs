//! Pulling the final answer out of a free-form model response.

use codeplan_core::Task;

const MARKER: &[u8] = b"answer is";

// Sentence punctuation only: brackets stay because bracket-sequence
// answers are made of them, and '-' stays for negative numbers.
const EDGE_PUNCT: &str = ".,!?;:\"'";

/// Extracts the answer span from a response.
///
/// The primary rule takes the text after the last occurrence of
/// "answer is" (case-insensitive), up to the end of that line; planned
/// responses restate the answer last, so the last marker wins over any
/// early answering. Without a usable marker, math tasks fall back to the
/// last number-like token and yes/no tasks to the last "yes"/"no" word.
pub fn answer_extract(response: &str, task: Task) -> Option<String> {
    if let Some(after) = after_last_marker(response) {
        let line = after.split('\n').next().unwrap_or("");
        let cleaned = clean_span(line);
        if !cleaned.is_empty() {
            return Some(cleaned);
        }
    }
    match task {
        Task::Math => last_number_token(response),
        Task::CoinFlip => last_yes_no(response),
        _ => None,
    }
}

fn after_last_marker(response: &str) -> Option<&str> {
    let hay = response.as_bytes();
    if hay.len() < MARKER.len() {
        return None;
    }
    (0..=hay.len() - MARKER.len())
        .rev()
        .find(|&i| hay[i..i + MARKER.len()].eq_ignore_ascii_case(MARKER))
        .map(|i| &response[i + MARKER.len()..])
}

fn clean_span(span: &str) -> String {
    let span = span.trim_start_matches(|c: char| c.is_whitespace() || c == ':');
    span.trim_end_matches(|c: char| c.is_whitespace() || EDGE_PUNCT.contains(c)).to_string()
}

fn last_number_token(text: &str) -> Option<String> {
    let mut found = None;
    for raw in text.split_whitespace() {
        let token = raw.trim_matches(|c: char| EDGE_PUNCT.contains(c) || "()$%".contains(c));
        let candidate = token.replace(',', "");
        if !candidate.is_empty()
            && candidate.chars().any(|c| c.is_ascii_digit())
            && candidate.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '-')
            && candidate.parse::<f64>().is_ok()
        {
            found = Some(candidate);
        }
    }
    found
}

fn last_yes_no(text: &str) -> Option<String> {
    let mut found = None;
    for raw in text.split_whitespace() {
        let token: String = raw
            .trim_matches(|c: char| !c.is_ascii_alphanumeric())
            .to_ascii_lowercase();
        if token == "yes" || token == "no" {
            found = Some(token);
        }
    }
    found
}
