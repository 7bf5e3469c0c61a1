//! The digit file parser must never panic, and anything it accepts must
//! survive a write/read round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;
use padic_paircorr::sequences::{read_sequence_str, write_sequence_to};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(xs) = read_sequence_str(text) {
        if xs.is_empty() {
            return;
        }
        let mut buf = Vec::new();
        write_sequence_to(&xs, &mut buf).expect("accepted sequence must serialize");
        let rewritten = String::from_utf8(buf).expect("digit format is ascii");
        let back = read_sequence_str(&rewritten).expect("own output must parse");
        assert_eq!(back, xs, "round trip changed the sequence");
    }
});
