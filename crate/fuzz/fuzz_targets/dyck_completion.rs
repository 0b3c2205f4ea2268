//! Bracket sequence decoder: a computed completion must actually
//! balance the sequence it was computed for.

#![no_main]

use codeplan_benchgen::{dyck_balanced, dyck_completion};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|prefix: &str| {
    if let Ok(completion) = dyck_completion(prefix) {
        let full = format!("{prefix} {completion}");
        assert!(dyck_balanced(&full), "completion must balance the prefix");
    }
});
