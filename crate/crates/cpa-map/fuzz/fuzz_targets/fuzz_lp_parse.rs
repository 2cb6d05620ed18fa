//! Feeds arbitrary bytes to the LP reader. Accepted programs must
//! round-trip: exporting and re-parsing has to reproduce the same bytes.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(model) = cpa_map::parse_lp(text) {
            let out = cpa_map::export_lp(&model);
            let again = cpa_map::parse_lp(&out).expect("canonical export parses");
            assert_eq!(cpa_map::export_lp(&again), out);
        }
    }
});
