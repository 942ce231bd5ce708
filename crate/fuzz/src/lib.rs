//! Shared guards for the fuzz targets. The library is exact-arithmetic, so
//! adversarial inputs cannot corrupt memory, but enormous rationals make
//! single iterations arbitrarily slow; every target bounds the numeric size
//! of what it feeds in.

use troptoda::rational::{parse_rat, Rat};

/// Parse bounded JSON: rejects oversized byte blobs outright.
pub fn bounded_json<T: serde::de::DeserializeOwned>(data: &[u8], max_len: usize) -> Option<T> {
    if data.len() > max_len {
        return None;
    }
    let text = std::str::from_utf8(data).ok()?;
    serde_json::from_str(text).ok()
}

/// A rational string small enough to iterate on: numerator and denominator
/// both under 30 bits.
pub fn tame_rat(s: &str) -> Option<Rat> {
    let r = parse_rat(s).ok()?;
    if r.numer().magnitude().bits() > 30 || r.denom().magnitude().bits() > 30 {
        return None;
    }
    Some(r)
}

/// All rationals in a list are tame.
pub fn tame_all(ss: &[String]) -> Option<Vec<Rat>> {
    ss.iter().map(|s| tame_rat(s)).collect()
}
