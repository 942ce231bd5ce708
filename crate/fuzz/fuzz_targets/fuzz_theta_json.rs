//! Fuzzes the theta query surface: evaluation, characteristics, reduction
//! and domain classification. Cross-checks quasi-periodicity of the value
//! under the reduction shift on every accepted input.

#![no_main]

use libfuzzer_sys::fuzz_target;
use troptoda::io::ThetaQueryJson;
use troptoda::rational::{dot_iv, rat, Rat};
use troptoda::theta::{in_domain, reduce, theta, theta_char};
use troptoda_fuzz::{bounded_json, tame_all};

fuzz_target!(|data: &[u8]| {
    let Some(json) = bounded_json::<ThetaQueryJson>(data, 4096) else {
        return;
    };
    if json.k.len() > 4 {
        return;
    }
    for row in &json.k {
        if tame_all(row).is_none() {
            return;
        }
    }
    if tame_all(&json.z).is_none() {
        return;
    }
    let Ok(k) = json.parse_k() else { return };
    let Ok(z) = json.parse_z() else { return };
    let Ok(r) = theta(&k, &z) else { return };
    assert!(!r.argmin.is_empty());
    assert_eq!(r.unique, r.argmin.len() == 1);

    if let Ok((zr, l)) = reduce(&k, &z) {
        let lk = k.mul_ivec(&l.0);
        let quasi = dot_iv(&l.0, &lk) * rat(1, 2) + dot_iv(&l.0, &z);
        let rr = theta(&k, &zr).expect("reduced argument evaluates");
        assert_eq!(r.value, quasi + rr.value, "quasi-periodicity");
    }

    if let Ok(Some(beta)) = json.parse_beta() {
        if beta.len() == k.dim() && beta.iter().all(small_rat) {
            let _ = theta_char(&k, &beta, &z);
        }
    }
    if let Some(m) = &json.m {
        if m.len() == k.dim() && m.iter().all(|x| x.abs() < 1 << 20) {
            let _ = in_domain(&k, &z, m);
        }
    }
});

fn small_rat(r: &Rat) -> bool {
    r.numer().magnitude().bits() <= 30 && r.denom().magnitude().bits() <= 30
}
