//! The CSV row parser must never panic, and an accepted row must
//! re-serialize to a line that parses to the same row.

#![no_main]

use libfuzzer_sys::fuzz_target;
use padic_paircorr::paircorr::parse_csv_line;

fuzz_target!(|data: &[u8]| {
    let Ok(line) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(row) = parse_csv_line(line) {
        let rewritten = row.csv_line();
        let back = parse_csv_line(&rewritten).expect("own output must parse");
        assert_eq!(back, row, "round trip changed the row: {rewritten}");
    }
});
