#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(s) = subharm::scenario::parse_scenario(text) {
            let _ = serde_json::to_string(&s);
        }
    }
});
