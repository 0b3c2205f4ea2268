//! Fenced block scanner and continuation splitter: never panic, and a
//! rendered plan block must scan back to the plan it was built from.

#![no_main]

use codeplan_core::{first_fenced_block, render_plan_block, split_continuation};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let _ = first_fenced_block(text);
    let _ = split_continuation(text);

    if !text.contains("```") && !text.trim().is_empty() {
        let rendered = render_plan_block(text);
        let block = first_fenced_block(&rendered).expect("rendered block must scan");
        assert_eq!(
            block.inner.trim_end_matches('\n'),
            text.trim_end_matches('\n'),
            "render and scan must round-trip"
        );
    }
});
