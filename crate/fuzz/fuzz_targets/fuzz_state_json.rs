//! Fuzzes the phase-space state decoder and a short evolution run: parsing
//! must never panic, and accepted states must evolve with exactly conserved
//! invariants.

#![no_main]

use libfuzzer_sys::fuzz_target;
use troptoda::io::StateJson;
use troptoda::udtoda::{evolve_step, invariants, phase_shift};
use troptoda_fuzz::{bounded_json, tame_all};

fuzz_target!(|data: &[u8]| {
    let Some(json) = bounded_json::<StateJson>(data, 4096) else {
        return;
    };
    if tame_all(&json.q).is_none() || tame_all(&json.w).is_none() {
        return;
    }
    let Ok(state) = json.to_state() else {
        return;
    };
    let c0 = invariants(&state);
    let mut s = state.clone();
    for _ in 0..4 {
        let _ = phase_shift(&s, 1);
        s = evolve_step(&s);
        assert_eq!(invariants(&s), c0, "invariant drift");
    }
});
