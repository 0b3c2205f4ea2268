//! Plan extraction from raw completions: the result is either an error
//! or a plan with visible content.

#![no_main]

use codeplan_curator::extract_plan_from_completion;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|completion: &str| {
    if let Ok(plan) = extract_plan_from_completion(completion) {
        assert!(!plan.trim().is_empty(), "extracted plan must have content");
    }
});
