//! Training triple parser: arbitrary bytes must never panic.

#![no_main]

use codeplan_core::parse_triples_reader;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = parse_triples_reader(data, "fuzz");
});
