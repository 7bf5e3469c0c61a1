//! The rational parser (fraction and decimal forms) must never panic, and
//! its canonical display must parse back to the same value.

#![no_main]

use libfuzzer_sys::fuzz_target;
use padic_paircorr::ExactRational;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(value) = text.parse::<ExactRational>() {
        let shown = value.to_string();
        let back: ExactRational = shown.parse().expect("canonical form must parse");
        assert_eq!(back, value, "display/parse round trip changed {shown}");
    }
});
