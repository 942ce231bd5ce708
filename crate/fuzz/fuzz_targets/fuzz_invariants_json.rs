//! Fuzzes the invariants decoder and the curve/graph constructors: accepted
//! generic data must always produce a graph whose pairing matrix equals the
//! closed-form period matrix (asserted inside the constructor).

#![no_main]

use libfuzzer_sys::fuzz_target;
use troptoda::curve::{build_graph, curve_data};
use troptoda::io::InvariantsJson;
use troptoda_fuzz::{bounded_json, tame_all};

fuzz_target!(|data: &[u8]| {
    let Some(json) = bounded_json::<InvariantsJson>(data, 2048) else {
        return;
    };
    if tame_all(&json.c).is_none() {
        return;
    }
    let Ok(inv) = json.to_invariants() else {
        return;
    };
    let Ok(cd) = curve_data(&inv) else {
        return;
    };
    let Ok(graph) = build_graph(&cd) else {
        return;
    };
    // probe point resolution on every edge midpoint
    for (i, e) in graph.edges().iter().enumerate() {
        let mid = &e.length / troptoda::rational::rat_i(2);
        let p = graph.point(i, mid).expect("midpoint is on the edge");
        let q = graph.locate(&p.x, &p.y).expect("embeddable point resolves");
        let qq = graph.point(q.edge, q.offset.clone()).expect("round trip");
        assert_eq!((qq.x, qq.y), (p.x, p.y));
    }
});
