//! Fuzzes the rational string parser: anything accepted must survive a
//! format/parse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;
use troptoda::rational::{fmt_rat, parse_rat};

fuzz_target!(|data: &[u8]| {
    if data.len() > 512 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse_rat(text) {
        let s = fmt_rat(&r);
        let back = parse_rat(&s).expect("formatted rationals re-parse");
        assert_eq!(back, r, "round trip changed the value");
    }
});
