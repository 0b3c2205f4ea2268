//! Boolean expression parser: arbitrary input may be rejected but must
//! never panic, and evaluation must be deterministic.

#![no_main]

use codeplan_benchgen::eval_boolean;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|expr: &str| {
    let first = eval_boolean(expr).ok();
    let second = eval_boolean(expr).ok();
    assert_eq!(first, second, "evaluation must be deterministic");
});
