//! Feeds arbitrary bytes to the model parser; accepted models must also
//! survive ground-atom table construction without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(model) = cpa_map::parse_mln(text) {
            let _ = cpa_map::AtomTable::new(&model);
        }
    }
});
