//! Fuzzes the discrete-limit harness config with tight caps on steps,
//! sweep length and precision.

#![no_main]

use libfuzzer_sys::fuzz_target;
use troptoda::dtoda::ud_trajectory_compare;
use troptoda::io::{DiscreteInputJson, StateJson};
use troptoda::rational::parse_rat_vec;
use troptoda_fuzz::{bounded_json, tame_all};

fuzz_target!(|data: &[u8]| {
    let Some(json) = bounded_json::<DiscreteInputJson>(data, 2048) else {
        return;
    };
    if json.eps.len() > 2 || tame_all(&json.q).is_none() || tame_all(&json.w).is_none() {
        return;
    }
    let Some(eps) = tame_all(&json.eps) else { return };
    // keep exponents within a sane range: eps not smaller than 1/20 and
    // not absurdly large
    for e in &eps {
        let f = e.numer().to_string().parse::<f64>().unwrap_or(0.0)
            / e.denom().to_string().parse::<f64>().unwrap_or(1.0);
        if !(0.05..=10.0).contains(&f) {
            return;
        }
    }
    let Ok(state) = (StateJson {
        g: json.g,
        q: json.q.clone(),
        w: json.w.clone(),
    })
    .to_state() else {
        return;
    };
    let eps = parse_rat_vec(&json.eps).expect("checked");
    let _ = ud_trajectory_compare(&state, &eps, json.steps.min(3), 30);
});
