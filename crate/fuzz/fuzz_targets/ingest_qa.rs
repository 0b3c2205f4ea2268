//! External QA corpus ingestion: arbitrary input in either supported
//! format must never panic.

#![no_main]

use codeplan_benchgen::{ingest_qa, QaFormat};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&selector, rest)) = data.split_first() else { return };
    let Ok(raw) = std::str::from_utf8(rest) else { return };
    let format = if selector % 2 == 0 { QaFormat::Musique } else { QaFormat::Hotpotqa };
    let _ = ingest_qa(raw, format, "fuzz.json");
});
