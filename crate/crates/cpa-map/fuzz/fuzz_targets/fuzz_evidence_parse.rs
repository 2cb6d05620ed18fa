//! Feeds arbitrary bytes to the evidence parser against a small fixed
//! model covering unary, binary, and closed-world predicates.

#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;

use cpa_map::{AtomTable, MlnModel};

fn fixture() -> &'static (MlnModel, AtomTable) {
    static FIXTURE: OnceLock<(MlnModel, AtomTable)> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        let model =
            cpa_map::parse_mln("d = {A, B, C}\np(d)\nq(d, d)\n*r(d)\n").expect("valid fixture");
        let atoms = AtomTable::new(&model).expect("small table");
        (model, atoms)
    })
}

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let (model, atoms) = fixture();
        let _ = cpa_map::parse_evidence(text, model, atoms);
    }
});
