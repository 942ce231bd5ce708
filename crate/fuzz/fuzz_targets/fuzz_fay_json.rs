//! Fuzzes the trisecant-check input surface end to end: curve building,
//! point resolution on the graph, winding arithmetic, and the verdict.

#![no_main]

use libfuzzer_sys::fuzz_target;
use troptoda::curve::{build_graph, curve_data};
use troptoda::fay::{FayProblem, FayStatus};
use troptoda::io::{FayInputJson, InvariantsJson};
use troptoda::rational::parse_rat_vec;
use troptoda_fuzz::{bounded_json, tame_all};

fuzz_target!(|data: &[u8]| {
    let Some(json) = bounded_json::<FayInputJson>(data, 8192) else {
        return;
    };
    if json.points.len() != 4
        || tame_all(&json.c).is_none()
        || tame_all(&json.beta).is_none()
        || tame_all(&json.z).is_none()
    {
        return;
    }
    for p in &json.points {
        if let Some(w) = &p.winding {
            if w.iter().any(|x| x.abs() > 1 << 10) {
                return;
            }
        }
    }
    let Ok(inv) = (InvariantsJson {
        g: json.g,
        c: json.c.clone(),
    })
    .to_invariants() else {
        return;
    };
    let Ok(cd) = curve_data(&inv) else { return };
    let Ok(graph) = build_graph(&cd) else { return };
    let mut pts = Vec::new();
    for p in &json.points {
        match p.resolve(&graph, json.g) {
            Ok(cp) => pts.push(cp),
            Err(_) => return,
        }
    }
    let (Ok(beta), Ok(z)) = (parse_rat_vec(&json.beta), parse_rat_vec(&json.z)) else {
        return;
    };
    let Ok(problem) = FayProblem::new(cd, [pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[3].clone()], beta, z) else {
        return;
    };
    let verdict = problem.check();
    // determinate signs never produce the all-equal pattern
    if !matches!(verdict.status, FayStatus::SignAmbiguous) {
        assert!(verdict.s[0] != verdict.s[1] || verdict.s[1] != verdict.s[2]);
    }
});
