//! Arbitrary text as a linear-form document. Must not panic.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qzeta::io::decode_linear_form;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let _ = decode_linear_form(&text);
});
