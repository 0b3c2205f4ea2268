//! Plan tokenizer and validator: never panic, and validation must be
//! idempotent on arbitrary input.

#![no_main]

use codeplan_lint::{tokenize_plan, validate_plan, ValidateOptions};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let _ = tokenize_plan(text);
    let opts = ValidateOptions::default();
    let first = validate_plan(text, &opts);
    let second = validate_plan(text, &opts);
    assert_eq!(first, second, "validation must be idempotent");
});
