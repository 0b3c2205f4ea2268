//! Last-letter oracle: arbitrary word lists must never panic.

#![no_main]

use codeplan_benchgen::last_letters;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|words: &str| {
    let _ = last_letters(words);
});
