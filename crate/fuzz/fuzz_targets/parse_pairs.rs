//! Pair file parser: never panic, and parsed records must survive a
//! serialize-reparse round trip byte-identically.

#![no_main]

use codeplan_core::parse_pairs_reader;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(pairs) = parse_pairs_reader(data, "fuzz") {
        let mut serialized = String::new();
        for pair in &pairs {
            serialized.push_str(&serde_json::to_string(pair).expect("pair serializes"));
            serialized.push('\n');
        }
        let reparsed = parse_pairs_reader(serialized.as_bytes(), "fuzz")
            .expect("serialized pairs must reparse");
        let again: Vec<String> =
            reparsed.iter().map(|p| serde_json::to_string(p).unwrap()).collect();
        let first: Vec<String> = pairs.iter().map(|p| serde_json::to_string(p).unwrap()).collect();
        assert_eq!(first, again, "round trip must be stable");
    }
});
