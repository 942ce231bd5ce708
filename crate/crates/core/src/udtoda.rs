//! The ultra-discrete periodic Toda lattice: phase space, piecewise-linear
//! evolution, and its conserved min-plus invariants.
//!
//! A state is a pair of cyclic sequences `(Q, W)` of length `g+1` with
//! `sum(Q) < sum(W)`. One evolution step is
//!
//! ```text
//! Q'_n = min[W_n, Q_n - X_n],   W'_n = Q_{n+1} + W_n - Q'_n,
//! X_n  = min_{k=0..g} sum_{l=1..k} (W_{n-l} - Q_{n-l}),
//! ```
//!
//! all indices cyclic modulo `g+1`. The invariants `C_{-1}, C_0, ..., C_g`
//! are min-plus polynomials in the state; the step preserves them exactly.

use std::cmp::min;

use num::Zero;

use crate::error::{Error, Result};
use crate::rational::{rat_i, rat_sum, Rat};

/// Largest supported genus. Everything is exhaustively enumerable in this
/// range, and the combinatorics stay fast.
pub const MAX_GENUS: usize = 6;

pub(crate) fn check_genus(g: usize) -> Result<()> {
    if (1..=MAX_GENUS).contains(&g) {
        Ok(())
    } else {
        Err(Error::UnsupportedGenus(g as i64))
    }
}

/// A point of the phase space: `g` and the cyclic sequences `Q`, `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UdState {
    g: usize,
    q: Vec<Rat>,
    w: Vec<Rat>,
}

impl UdState {
    /// Validates lengths, the genus range, and `sum(Q) < sum(W)`.
    pub fn new(g: usize, q: Vec<Rat>, w: Vec<Rat>) -> Result<Self> {
        check_genus(g)?;
        if q.len() != g + 1 || w.len() != g + 1 {
            return Err(Error::InvalidState(format!(
                "expected {} sites, got |Q|={} |W|={}",
                g + 1,
                q.len(),
                w.len()
            )));
        }
        if rat_sum(&q) >= rat_sum(&w) {
            return Err(Error::InvalidState(
                "sum(Q) < sum(W) must hold strictly".into(),
            ));
        }
        Ok(UdState { g, q, w })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn sites(&self) -> usize {
        self.g + 1
    }

    pub fn q(&self) -> &[Rat] {
        &self.q
    }

    pub fn w(&self) -> &[Rat] {
        &self.w
    }

    /// `Q_n` with a cyclic 1-based index (any integer accepted).
    pub fn q_at(&self, n: i64) -> &Rat {
        &self.q[cyc(n, self.sites())]
    }

    /// `W_n` with a cyclic 1-based index.
    pub fn w_at(&self, n: i64) -> &Rat {
        &self.w[cyc(n, self.sites())]
    }

    /// The state with both sequences rotated by `by` sites.
    pub fn rotate(&self, by: i64) -> UdState {
        let n = self.sites();
        let q = (0..n).map(|i| self.q_at(i as i64 + 1 + by).clone()).collect();
        let w = (0..n).map(|i| self.w_at(i as i64 + 1 + by).clone()).collect();
        UdState { g: self.g, q, w }
    }
}

/// Maps a 1-based cyclic index onto `0..len`.
fn cyc(n: i64, len: usize) -> usize {
    (n - 1).rem_euclid(len as i64) as usize
}

/// The phase `X_n = min_{k=0..g} sum_{l=1..k} (W_{n-l} - Q_{n-l})`.
/// The empty `k=0` sum is zero, so the result is never positive.
pub fn phase_shift(state: &UdState, n: i64) -> Rat {
    let mut best = Rat::zero();
    let mut partial = Rat::zero();
    for l in 1..=state.g as i64 {
        partial += state.w_at(n - l) - state.q_at(n - l);
        best = min(best, partial.clone());
    }
    best
}

/// One step of the evolution map. The output is checked to lie back in the
/// phase space.
pub fn evolve_step(state: &UdState) -> UdState {
    let sites = state.sites();
    let mut q2 = Vec::with_capacity(sites);
    let mut w2 = Vec::with_capacity(sites);
    for n in 1..=sites as i64 {
        let x = phase_shift(state, n);
        let qn = min(state.w_at(n).clone(), state.q_at(n) - x);
        let wn = state.q_at(n + 1) + state.w_at(n) - &qn;
        q2.push(qn);
        w2.push(wn);
    }
    assert!(
        rat_sum(&q2) < rat_sum(&w2),
        "phase-space closure violated; evolution bug"
    );
    UdState {
        g: state.g,
        q: q2,
        w: w2,
    }
}

/// The conserved quantities `C = (C_{-1}, C_0, ..., C_g)` of a state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralInvariants {
    g: usize,
    c: Vec<Rat>,
}

impl SpectralInvariants {
    /// `c` lists `C_{-1}, C_0, ..., C_g` in order (`g+2` entries).
    pub fn new(g: usize, c: Vec<Rat>) -> Result<Self> {
        check_genus(g)?;
        if c.len() != g + 2 {
            return Err(Error::Input(format!(
                "expected {} invariants, got {}",
                g + 2,
                c.len()
            )));
        }
        Ok(SpectralInvariants { g, c })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    /// `C_i` for `-1 <= i <= g`. The virtual `C_{g+1}` is zero; it is the
    /// coefficient of the monic leading term and is accepted here too.
    pub fn c_at(&self, i: i64) -> Rat {
        if i == self.g as i64 + 1 {
            return Rat::zero();
        }
        self.c[(i + 1) as usize].clone()
    }

    /// The raw list `C_{-1}, ..., C_g`.
    pub fn c(&self) -> &[Rat] {
        &self.c
    }
}

/// Minimal sum of `k` pairwise non-adjacent entries of a linear chain.
/// `None` when no such selection exists.
fn min_indep_sum_chain(vals: &[Rat], k: usize) -> Option<Rat> {
    if k == 0 {
        return Some(Rat::zero());
    }
    // best[j] = (not taking current element, taking current element)
    let mut no: Vec<Option<Rat>> = vec![None; k + 1];
    let mut yes: Vec<Option<Rat>> = vec![None; k + 1];
    no[0] = Some(Rat::zero());
    for v in vals {
        let mut no2 = vec![None; k + 1];
        let mut yes2 = vec![None; k + 1];
        for j in 0..=k {
            no2[j] = match (no[j].clone(), yes[j].clone()) {
                (Some(a), Some(b)) => Some(min(a, b)),
                (a, b) => a.or(b),
            };
            if j > 0 {
                yes2[j] = no[j - 1].clone().map(|a| a + v);
            }
        }
        no = no2;
        yes = yes2;
    }
    match (no[k].clone(), yes[k].clone()) {
        (Some(a), Some(b)) => Some(min(a, b)),
        (a, b) => a.or(b),
    }
}

/// Minimal sum of `k` cyclically non-adjacent entries of a cycle.
fn min_indep_sum_cycle(vals: &[Rat], k: usize) -> Option<Rat> {
    if k == 0 {
        return Some(Rat::zero());
    }
    let n = vals.len();
    // Case 1: entry 0 not chosen -> chain on 1..n.
    let without = min_indep_sum_chain(&vals[1..], k);
    // Case 2: entry 0 chosen -> neighbours 1 and n-1 excluded.
    let with = if n >= 3 {
        min_indep_sum_chain(&vals[2..n - 1], k - 1).map(|s| s + &vals[0])
    } else {
        None
    };
    match (without, with) {
        (Some(a), Some(b)) => Some(min(a, b)),
        (a, b) => a.or(b),
    }
}

/// The invariants of a state. `C_{-1}` is the full sum; for `0 <= i <= g`,
/// `C_i` is the minimal sum over `g+1-i` cyclically non-adjacent entries of
/// the interleaved cycle `(Q_1, W_1, Q_2, W_2, ...)`. This is the
/// subtraction-free ultra-discretization of the Lax characteristic
/// polynomial; the `dtoda` harness pins it against the exact coefficients.
pub fn invariants(state: &UdState) -> SpectralInvariants {
    let g = state.g;
    let mut cycle = Vec::with_capacity(2 * (g + 1));
    for n in 0..=g {
        cycle.push(state.q[n].clone());
        cycle.push(state.w[n].clone());
    }
    let mut c = Vec::with_capacity(g + 2);
    c.push(rat_sum(&cycle));
    for i in 0..=g {
        let k = g + 1 - i;
        c.push(min_indep_sum_cycle(&cycle, k).expect("independent set exists"));
    }
    SpectralInvariants { g, c }
}

/// Strict inequalities making the spectral curve smooth:
/// `C_{-1} > 2 C_0`, `C_i + C_{i+2} > 2 C_{i+1}` for `0 <= i <= g-2`,
/// and `C_{g-1} > 2 C_g`.
pub fn is_generic(inv: &SpectralInvariants) -> bool {
    let g = inv.g as i64;
    if inv.c_at(-1) <= inv.c_at(0) * rat_i(2) {
        return false;
    }
    for i in 0..=g - 2 {
        if inv.c_at(i) + inv.c_at(i + 2) <= inv.c_at(i + 1) * rat_i(2) {
            return false;
        }
    }
    inv.c_at(g - 1) > inv.c_at(g) * rat_i(2)
}

/// Evaluates the defining min-plus polynomial
/// `F(X,Y) = min[2Y, Y + min_i(iX + C_i), C_{-1}]` (with `C_{g+1} = 0`)
/// and counts how many of the flattened affine terms attain the minimum.
/// A point lies on the curve iff at least two terms attain it.
pub fn tropical_poly_f(inv: &SpectralInvariants, x: &Rat, y: &Rat) -> (Rat, usize) {
    let g = inv.g as i64;
    let mut terms: Vec<Rat> = Vec::with_capacity(inv.g + 4);
    terms.push(y * rat_i(2));
    for i in 0..=g + 1 {
        terms.push(y + x * rat_i(i) + inv.c_at(i));
    }
    terms.push(inv.c_at(-1));
    let value = terms.iter().min().cloned().expect("nonempty");
    let count = terms.iter().filter(|t| **t == value).count();
    (value, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    pub(crate) fn state(g: usize, q: &[i64], w: &[i64]) -> UdState {
        UdState::new(
            g,
            q.iter().map(|x| rat_i(*x)).collect(),
            w.iter().map(|x| rat_i(*x)).collect(),
        )
        .unwrap()
    }

    fn inv_of(c: &[i64]) -> SpectralInvariants {
        SpectralInvariants::new(c.len() - 2, c.iter().map(|x| rat_i(*x)).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_states() {
        assert!(UdState::new(1, vec![rat_i(0)], vec![rat_i(1)]).is_err());
        assert!(UdState::new(0, vec![rat_i(0)], vec![rat_i(1)]).is_err());
        assert!(UdState::new(7, vec![rat_i(0); 8], vec![rat_i(1); 8]).is_err());
        // sum(Q) = sum(W) is on the boundary and rejected
        assert!(UdState::new(1, vec![rat_i(1), rat_i(1)], vec![rat_i(0), rat_i(2)]).is_err());
    }

    #[test]
    fn phase_shift_examples() {
        let s = state(1, &[0, 0], &[1, 1]);
        assert_eq!(phase_shift(&s, 1), rat_i(0));
        let s = state(1, &[0, 1], &[2, 3]);
        assert_eq!(phase_shift(&s, 1), rat_i(0));
        let s = state(1, &[3, 1], &[2, 3]);
        assert_eq!(phase_shift(&s, 1), rat_i(0));
        assert_eq!(phase_shift(&s, 2), rat_i(-1));
    }

    #[test]
    fn evolve_examples() {
        let fixed = state(1, &[0, 0], &[1, 1]);
        assert_eq!(evolve_step(&fixed), fixed);

        let s = state(1, &[0, 1], &[2, 3]);
        assert_eq!(evolve_step(&s), state(1, &[0, 1], &[3, 2]));

        let s = state(1, &[0, 1], &[0, 5]);
        assert_eq!(evolve_step(&s), state(1, &[0, 1], &[1, 4]));
    }

    #[test]
    fn invariants_examples() {
        let s = state(1, &[0, 1], &[2, 3]);
        assert_eq!(invariants(&s).c(), &[rat_i(6), rat_i(1), rat_i(0)]);
        // a different state on the same isolevel set
        let s = state(1, &[0, 1], &[0, 5]);
        assert_eq!(invariants(&s).c(), &[rat_i(6), rat_i(1), rat_i(0)]);

        let s = state(2, &[0, 0, 0], &[1, 1, 1]);
        assert_eq!(
            invariants(&s).c(),
            &[rat_i(3), rat_i(0), rat_i(0), rat_i(0)]
        );
    }

    #[test]
    fn genericity_examples() {
        assert!(is_generic(&inv_of(&[11, 5, 2, 0])));
        assert!(is_generic(&inv_of(&[6, 1, 0])));
        // C_{-1} = 2 C_0 is not strict
        assert!(!is_generic(&inv_of(&[4, 2, 0])));
    }

    #[test]
    fn tropical_poly_examples() {
        let inv = inv_of(&[11, 5, 2, 0]);
        let (_, n) = tropical_poly_f(&inv, &rat_i(0), &rat_i(0));
        assert!(n >= 2, "vertex of the curve");
        let (_, n) = tropical_poly_f(&inv, &rat_i(0), &rat_i(11));
        assert!(n >= 2, "(0,11) lies on the curve");
        let (_, n) = tropical_poly_f(&inv, &rat_i(-100), &rat_i(-1000));
        assert_eq!(n, 1, "far away a single term dominates");
        // midpoint of an edge rather than a vertex: exactly two terms tie
        let (_, n) = tropical_poly_f(&inv, &rat_i(0), &rat(11, 2));
        assert_eq!(n, 2);
    }

    #[test]
    fn conservation_smoke() {
        let mut s = state(2, &[0, 1, 2], &[3, 1, 4]);
        let c0 = invariants(&s);
        for _ in 0..50 {
            s = evolve_step(&s);
            assert_eq!(invariants(&s), c0);
        }
    }

    #[test]
    fn rotation_commutes_with_evolution() {
        let s = state(3, &[0, 2, 1, 0], &[1, 3, 0, 2]);
        let lhs = evolve_step(&s.rotate(1));
        let rhs = evolve_step(&s).rotate(1);
        assert_eq!(lhs, rhs);
    }
}
