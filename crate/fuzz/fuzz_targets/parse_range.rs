#![no_main]

use libfuzzer_sys::fuzz_target;
use qzeta::io::parse_range;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(v) = parse_range(&text) {
        assert!(!v.is_empty());
    }
});
