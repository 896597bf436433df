#![no_main]

use libfuzzer_sys::fuzz_target;
use qzeta::io::parse_qpoint;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_qpoint(text) {
        assert!(parse_qpoint(&q.to_string()).ok() == Some(q));
    }
});
