#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let items: Vec<&str> = text.split(',').collect();
        let _ = subharm::scenario::parse_overrides(&items);
    }
});
