#![no_main]

use libfuzzer_sys::fuzz_target;
use qzeta::io::{decode_ratfunc, RatFuncJson};

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(f) = decode_ratfunc(&text) {
        let _ = serde_json::to_string(&RatFuncJson::from_ratfunc(&f));
    }
});
