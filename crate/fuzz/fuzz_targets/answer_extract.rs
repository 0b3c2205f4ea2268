//! Answer extraction: arbitrary responses for every task kind must
//! never panic.

#![no_main]

use codeplan_core::Task;
use codeplan_metrics::answer_extract;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&selector, rest)) = data.split_first() else { return };
    let Ok(response) = std::str::from_utf8(rest) else { return };
    let task = match selector % 5 {
        0 => Task::CoinFlip,
        1 => Task::LastLetter,
        2 => Task::Boolean,
        3 => Task::Dyck,
        _ => Task::MultiHopQa,
    };
    let _ = answer_extract(response, task);
});
