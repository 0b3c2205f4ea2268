//! Trace record parser: arbitrary bytes must never panic.

#![no_main]

use codeplan_core::parse_traces_reader;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = parse_traces_reader(data, "fuzz");
});
