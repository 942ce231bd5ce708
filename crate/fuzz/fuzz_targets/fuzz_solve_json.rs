//! Fuzzes the theta-solution runner config: every accepted curve and start
//! point must satisfy the projection/evolution commutation for a few steps.

#![no_main]

use libfuzzer_sys::fuzz_target;
use troptoda::curve::curve_data;
use troptoda::io::{InvariantsJson, SolveInputJson};
use troptoda::rational::parse_rat_vec;
use troptoda::taudyn::translation_flow_check;
use troptoda_fuzz::{bounded_json, tame_all};

fuzz_target!(|data: &[u8]| {
    let Some(json) = bounded_json::<SolveInputJson>(data, 2048) else {
        return;
    };
    if tame_all(&json.c).is_none() || tame_all(&json.z0).is_none() {
        return;
    }
    let Ok(inv) = (InvariantsJson {
        g: json.g,
        c: json.c.clone(),
    })
    .to_invariants() else {
        return;
    };
    let Ok(cd) = curve_data(&inv) else { return };
    let Ok(z0) = parse_rat_vec(&json.z0) else { return };
    if z0.len() != json.g {
        return;
    }
    let steps = json.steps.min(3);
    if let Ok(ok) = translation_flow_check(&cd, &z0, steps) {
        assert!(ok, "theta solution must track the direct evolution");
    }
});
