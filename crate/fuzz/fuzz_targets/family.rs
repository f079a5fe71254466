#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(f) = subharm::scenario::parse_family(text) {
            if let Ok(c) = f.compile() {
                for x in [-2.0, -0.5, 0.0, 0.5, 1.0, 3.0] {
                    let _ = c.value(x);
                }
            }
        }
    }
});
