//! Fuzzes the hyperelliptic-limit harness config: root isolation either
//! succeeds with ordered interlacing roots or fails with the dedicated
//! error, never a panic.

#![no_main]

use libfuzzer_sys::fuzz_target;
use troptoda::hyperell::{root_limit_error, scaled_curve};
use troptoda::io::{InvariantsJson, UdLimitInputJson};
use troptoda::rational::parse_rat_vec;
use troptoda_fuzz::{bounded_json, tame_all};

fuzz_target!(|data: &[u8]| {
    let Some(json) = bounded_json::<UdLimitInputJson>(data, 2048) else {
        return;
    };
    if json.eps.len() > 2 || json.g > 3 || tame_all(&json.c).is_none() {
        return;
    }
    let Some(eps_list) = tame_all(&json.eps) else {
        return;
    };
    let Ok(inv) = (InvariantsJson {
        g: json.g,
        c: json.c.clone(),
    })
    .to_invariants() else {
        return;
    };
    // bound magnitudes so exponentials stay in range at modest precision
    for c in inv.c() {
        let f = c.numer().to_string().parse::<f64>().unwrap_or(f64::MAX)
            / c.denom().to_string().parse::<f64>().unwrap_or(1.0);
        if f.abs() > 64.0 {
            return;
        }
    }
    let eps = parse_rat_vec(&json.eps).expect("checked");
    let _ = eps_list;
    for e in &eps {
        let f = e.numer().to_string().parse::<f64>().unwrap_or(0.0)
            / e.denom().to_string().parse::<f64>().unwrap_or(1.0);
        if !(0.05..=10.0).contains(&f) {
            continue;
        }
        if let Ok(sc) = scaled_curve(&inv, e, 40) {
            let err = root_limit_error(&sc).expect("roots are positive");
            assert!(err.is_finite());
        }
    }
});
