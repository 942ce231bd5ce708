//! Exact evaluation of the min-plus Riemann theta function
//!
//! ```text
//! Theta(Z)      = min_{m in Z^g} q_0(m, Z),
//! q_b(m, Z)     = 1/2 m K m' + m (Z + b K)',
//! Theta[b](Z)   = 1/2 b K b' + b Z' + min_m q_b(m, Z),
//! ```
//!
//! together with the full set of minimizers. Admissible `K` are symmetric
//! with positive diagonal-dominance margin; period matrices of the spectral
//! curves always qualify.
//!
//! Evaluation first reduces `Z` by the quasi-periodicity lattice `K Z^g`,
//! then walks downhill over the restricted test family
//! `l = ±(e_j + ... + e_k)`. For matrices in this class a non-minimal `m`
//! always admits a descending test vector, so the walk ends in a minimizer;
//! ties are collected by flooding zero-cost test moves. The brute-force box
//! oracle in the tests pins both claims.

use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{gershgorin_margin, invert, is_square, is_symmetric, ivec_mat, vec_mat, Mat};
use crate::rational::{dot_iv, dot_vv, rat, rat_i, round_nearest, Rat};

/// An integer lattice vector of length `g`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVec(pub Vec<i64>);

impl LatticeVec {
    pub fn zero(g: usize) -> Self {
        LatticeVec(vec![0; g])
    }

    /// Standard basis vector `e_i` (1-based `i`).
    pub fn e(g: usize, i: usize) -> Self {
        let mut v = vec![0; g];
        v[i - 1] = 1;
        LatticeVec(v)
    }

    /// The all-ones vector.
    pub fn ones(g: usize) -> Self {
        LatticeVec(vec![1; g])
    }

    /// `e_1 + ... + e_k`.
    pub fn ones_k(g: usize, k: usize) -> Self {
        let mut v = vec![0; g];
        v[..k].fill(1);
        LatticeVec(v)
    }

    /// `(g, g-1, ..., 1)`.
    pub fn gbar(g: usize) -> Self {
        LatticeVec((1..=g as i64).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn neg(&self) -> Self {
        LatticeVec(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn as_rat(&self) -> Vec<Rat> {
        self.0.iter().map(|x| rat_i(*x)).collect()
    }
}

/// A theta characteristic: a rational vector `b` of length `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Characteristic(pub Vec<Rat>);

/// An admissible quadratic form: symmetric `K` with positive Gershgorin
/// margin, together with its cached exact inverse.
#[derive(Debug, Clone)]
pub struct KForm {
    k: Mat,
    inv: Mat,
    margin: Rat,
}

impl KForm {
    pub fn new(k: Mat) -> Result<Self> {
        if k.is_empty() || !is_square(&k) {
            return Err(Error::DimensionMismatch("K must be square and nonempty".into()));
        }
        if !is_symmetric(&k) {
            return Err(Error::NotPositiveDefinite("K must be symmetric".into()));
        }
        let margin = gershgorin_margin(&k);
        if margin <= Rat::zero() {
            return Err(Error::NotPositiveDefinite(format!(
                "diagonal dominance margin {} is not positive",
                margin
            )));
        }
        let inv = invert(&k)?;
        Ok(KForm { k, inv, margin })
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }

    pub fn mat(&self) -> &Mat {
        &self.k
    }

    pub fn inv(&self) -> &Mat {
        &self.inv
    }

    pub fn margin(&self) -> &Rat {
        &self.margin
    }

    /// `m K` for an integer row vector.
    pub fn mul_ivec(&self, m: &[i64]) -> Vec<Rat> {
        ivec_mat(m, &self.k)
    }

    /// `v K` for a rational row vector.
    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        vec_mat(v, &self.k)
    }
}

/// Value and complete minimizer set of a theta evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaResult {
    pub value: Rat,
    pub argmin: Vec<LatticeVec>,
    pub unique: bool,
}

fn check_dim(k: &KForm, v: usize, what: &str) -> Result<()> {
    if v != k.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{what} has length {v}, expected {}",
            k.dim()
        )));
    }
    Ok(())
}

/// `q_b(m, Z) = 1/2 m K m' + m (Z + b K)'`.
pub fn q_form(k: &KForm, beta: &[Rat], m: &[i64], z: &[Rat]) -> Result<Rat> {
    check_dim(k, beta.len(), "beta")?;
    check_dim(k, m.len(), "m")?;
    check_dim(k, z.len(), "Z")?;
    let km = k.mul_ivec(m);
    let bk = k.mul_vec(beta);
    Ok(dot_iv(m, &km) * rat(1, 2) + dot_iv(m, z) + dot_iv(m, &bk))
}

/// All `±(e_j + ... + e_k)` for `1 <= j <= k <= g`.
fn interval_vectors(g: usize) -> Vec<LatticeVec> {
    let mut out = Vec::with_capacity(g * (g + 1));
    for j in 1..=g {
        for k in j..=g {
            let mut v = vec![0i64; g];
            v[j - 1..k].fill(1);
            out.push(LatticeVec(v.clone()));
            out.push(LatticeVec(v.iter().map(|x| -x).collect()));
        }
    }
    out
}

/// `f_m(Z, l) = l Z' + l K (m + 1/2 l)'`; the amount by which moving the
/// candidate minimizer from `m` to `m + l` increases `q_0`.
fn f_move(k: &KForm, z: &[Rat], m: &[i64], l: &[i64]) -> Rat {
    let kl = k.mul_ivec(l);
    dot_iv(l, z) + dot_iv(m, &kl) + dot_iv(l, &kl) * rat(1, 2)
}

/// Complete minimizer set of `m -> q_0(m, Z)` plus the attained minimum.
fn minimize(k: &KForm, z: &[Rat]) -> (Rat, Vec<LatticeVec>) {
    let g = k.dim();
    // Reduce by the period lattice: work at Z + lK where the minimizer is
    // near the origin, then shift the argmin back.
    let (zr, shift) = reduce_inner(k, z);
    let moves = interval_vectors(g);

    let mut m = LatticeVec::zero(g);
    loop {
        let mut best: Option<(Rat, &LatticeVec)> = None;
        for l in &moves {
            let f = f_move(k, &zr, &m.0, &l.0);
            if f < Rat::zero() {
                match &best {
                    Some((fb, _)) if *fb <= f => {}
                    _ => best = Some((f, l)),
                }
            }
        }
        match best {
            Some((_, l)) => m = m.add(l),
            None => break,
        }
    }

    // Flood zero-cost moves to collect every tied minimizer.
    let mut seen: BTreeSet<LatticeVec> = BTreeSet::new();
    let mut queue = vec![m.clone()];
    seen.insert(m.clone());
    while let Some(cur) = queue.pop() {
        for l in &moves {
            if f_move(k, &zr, &cur.0, &l.0).is_zero() {
                let next = cur.add(l);
                if seen.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
    }

    let argmin: Vec<LatticeVec> = seen.into_iter().map(|v| v.add(&shift)).collect();
    let value = q_form(k, &vec![Rat::zero(); g], &argmin[0].0, z).expect("dims checked");
    debug_assert!(argmin
        .iter()
        .all(|mm| q_form(k, &vec![Rat::zero(); g], &mm.0, z).unwrap() == value));
    (value, argmin)
}

/// `Theta(Z)` with its complete argmin set.
pub fn theta(k: &KForm, z: &[Rat]) -> Result<ThetaResult> {
    check_dim(k, z.len(), "Z")?;
    let (value, argmin) = minimize(k, z);
    let unique = argmin.len() == 1;
    Ok(ThetaResult {
        value,
        argmin,
        unique,
    })
}

/// `Theta[b](Z)`. The argmin set is that of `m -> q_b(m, Z)`.
pub fn theta_char(k: &KForm, beta: &[Rat], z: &[Rat]) -> Result<ThetaResult> {
    check_dim(k, beta.len(), "beta")?;
    check_dim(k, z.len(), "Z")?;
    let bk = k.mul_vec(beta);
    let zeff: Vec<Rat> = z.iter().zip(&bk).map(|(a, b)| a + b).collect();
    let (inner, argmin) = minimize(k, &zeff);
    let value = dot_vv(beta, &bk) * rat(1, 2) + dot_vv(beta, z) + inner;
    let unique = argmin.len() == 1;
    Ok(ThetaResult {
        value,
        argmin,
        unique,
    })
}

fn reduce_inner(k: &KForm, z: &[Rat]) -> (Vec<Rat>, LatticeVec) {
    let zk = vec_mat(z, k.inv());
    let l: Vec<i64> = zk
        .iter()
        .map(|c| {
            let n: BigInt = -round_nearest(c);
            n.to_i64().expect("reduction shift fits i64")
        })
        .collect();
    let lk = k.mul_ivec(&l);
    let zr: Vec<Rat> = z.iter().zip(&lk).map(|(a, b)| a + b).collect();
    (zr, LatticeVec(l))
}

/// Quasi-periodicity reduction: returns `(Z + lK, l)` with
/// `|(Z + lK) K^{-1}|_i <= 1/2` componentwise. The exact identity
/// `Theta(Z) = 1/2 l K l' + l Z' + Theta(Z + lK)` is checked in debug builds.
pub fn reduce(k: &KForm, z: &[Rat]) -> Result<(Vec<Rat>, LatticeVec)> {
    check_dim(k, z.len(), "Z")?;
    let (zr, l) = reduce_inner(k, z);
    debug_assert!(vec_mat(&zr, k.inv())
        .iter()
        .all(|c| c.abs() <= rat(1, 2)));
    debug_assert_eq!(
        theta(k, z).unwrap().value,
        {
            let lk = k.mul_ivec(&l.0);
            dot_iv(&l.0, &lk) * rat(1, 2) + dot_iv(&l.0, z) + theta(k, &zr).unwrap().value
        },
        "quasi-periodicity identity"
    );
    Ok((zr, l))
}

/// Position of `Z` relative to the closed fundamental region `D_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainPosition {
    Interior,
    Boundary,
    Outside,
}

/// Classifies `Z` against `D_m` using only the restricted test family
/// `l = ±(e_j + ... + e_k)`: interior iff all `f_m(Z, l) > 0`, boundary iff
/// the minimum is exactly zero.
pub fn in_domain(k: &KForm, z: &[Rat], m: &[i64]) -> Result<DomainPosition> {
    check_dim(k, z.len(), "Z")?;
    check_dim(k, m.len(), "m")?;
    let mut boundary = false;
    for l in interval_vectors(k.dim()) {
        let f = f_move(k, z, m, &l.0);
        if f < Rat::zero() {
            return Ok(DomainPosition::Outside);
        }
        if f.is_zero() {
            boundary = true;
        }
    }
    Ok(if boundary {
        DomainPosition::Boundary
    } else {
        DomainPosition::Interior
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn kform(entries: &[&[i64]]) -> KForm {
        let m: Mat = entries
            .iter()
            .map(|row| row.iter().map(|x| rat_i(*x)).collect())
            .collect();
        KForm::new(m).unwrap()
    }

    fn zv(vals: &[i64]) -> Vec<Rat> {
        vals.iter().map(|x| rat_i(*x)).collect()
    }

    /// Brute-force minimum over the box `|m_i| <= radius`.
    pub(crate) fn brute_force(k: &KForm, z: &[Rat], radius: i64) -> (Rat, Vec<LatticeVec>) {
        let g = k.dim();
        let mut best: Option<Rat> = None;
        let mut arg: Vec<LatticeVec> = Vec::new();
        let mut m = vec![-radius; g];
        loop {
            let mi: Vec<i64> = m.clone();
            let q = q_form(k, &vec![Rat::zero(); g], &mi, z).unwrap();
            match &best {
                Some(b) if q > *b => {}
                Some(b) if q == *b => arg.push(LatticeVec(mi)),
                _ => {
                    best = Some(q);
                    arg = vec![LatticeVec(mi)];
                }
            }
            let mut i = 0;
            loop {
                if i == g {
                    arg.sort();
                    return (best.unwrap(), arg);
                }
                m[i] += 1;
                if m[i] <= radius {
                    break;
                }
                m[i] = -radius;
                i += 1;
            }
        }
    }

    #[test]
    fn kform_rejects_inadmissible() {
        let asym = vec![vec![rat_i(2), rat_i(1)], vec![rat_i(0), rat_i(2)]];
        assert!(KForm::new(asym).is_err());
        let thin = vec![vec![rat_i(1), rat_i(-1)], vec![rat_i(-1), rat_i(1)]];
        assert!(matches!(
            KForm::new(thin),
            Err(Error::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn q_form_examples() {
        let k = kform(&[&[18, -3], &[-3, 6]]);
        let zero_beta = zv(&[0, 0]);
        assert_eq!(
            q_form(&k, &zero_beta, &[0, 0], &zv(&[5, 7])).unwrap(),
            rat_i(0)
        );
        let k1 = kform(&[&[12]]);
        assert_eq!(
            q_form(&k1, &zv(&[0]), &[1], &zv(&[-11])).unwrap(),
            rat_i(-5)
        );
        let z = vec![rat_i(6), rat(7, 2)];
        assert_eq!(
            q_form(&k, &zero_beta, &[0, -1], &z).unwrap(),
            rat(-1, 2)
        );
        assert!(q_form(&k, &zero_beta, &[0], &z).is_err());
    }

    #[test]
    fn theta_examples() {
        let k1 = kform(&[&[12]]);
        let r = theta(&k1, &zv(&[0])).unwrap();
        assert_eq!(r.value, rat_i(0));
        assert!(r.unique);
        assert_eq!(r.argmin, vec![LatticeVec(vec![0])]);

        let r = theta(&k1, &zv(&[-11])).unwrap();
        assert_eq!(r.value, rat_i(-5));
        assert_eq!(r.argmin, vec![LatticeVec(vec![1])]);

        let k = kform(&[&[18, -3], &[-3, 6]]);
        let r = theta(&k, &[rat_i(6), rat(7, 2)]).unwrap();
        assert_eq!(r.value, rat(-1, 2));
        assert!(!r.unique);
        assert_eq!(
            r.argmin,
            vec![LatticeVec(vec![-1, -1]), LatticeVec(vec![0, -1])]
        );
    }

    #[test]
    fn theta_char_example() {
        // beta = (-1/2, 0): Theta[b]((11,0)) = 1/2 bKb' - 11/2 + Theta((2,3/2))
        let k = kform(&[&[18, -3], &[-3, 6]]);
        let beta = vec![rat(-1, 2), rat_i(0)];
        let r = theta_char(&k, &beta, &zv(&[11, 0])).unwrap();
        assert_eq!(r.value, rat(9, 4) - rat(11, 2) + rat_i(0));
        assert!(r.unique);
        assert_eq!(r.argmin, vec![LatticeVec(vec![0, 0])]);
    }

    #[test]
    fn reduce_examples() {
        let k1 = kform(&[&[12]]);
        let (zr, l) = reduce(&k1, &zv(&[12])).unwrap();
        assert_eq!(zr, zv(&[0]));
        assert_eq!(l, LatticeVec(vec![-1]));
        assert_eq!(theta(&k1, &zv(&[12])).unwrap().value, rat_i(-6));

        let (zr, l) = reduce(&k1, &zv(&[3])).unwrap();
        assert_eq!(zr, zv(&[3]));
        assert_eq!(l, LatticeVec(vec![0]));

        let k = kform(&[&[18, -3], &[-3, 6]]);
        let (zr, l) = reduce(&k, &zv(&[18, -3])).unwrap();
        assert_eq!(zr, zv(&[0, 0]));
        assert_eq!(l, LatticeVec(vec![-1, 0]));
    }

    #[test]
    fn in_domain_examples() {
        let k = kform(&[&[18, -3], &[-3, 6]]);
        let pos = in_domain(&k, &[rat_i(6), rat(7, 2)], &[0, -1]).unwrap();
        assert_eq!(pos, DomainPosition::Boundary);

        let k1 = kform(&[&[12]]);
        assert_eq!(
            in_domain(&k1, &zv(&[3]), &[0]).unwrap(),
            DomainPosition::Interior
        );
        assert_eq!(
            in_domain(&k1, &zv(&[6]), &[0]).unwrap(),
            DomainPosition::Boundary
        );
        assert_eq!(
            in_domain(&k1, &zv(&[7]), &[0]).unwrap(),
            DomainPosition::Outside
        );

        // -1/2 * ones * K sits on the boundary of D_0
        let beta = vec![rat(-1, 2), rat(-1, 2)];
        let bk = k.mul_vec(&beta);
        assert_eq!(bk, vec![rat(-15, 2), rat(-3, 2)]);
        assert_eq!(
            in_domain(&k, &bk, &[0, 0]).unwrap(),
            DomainPosition::Boundary
        );
    }

    #[test]
    fn matches_brute_force_on_small_grid() {
        let k = kform(&[&[18, -3], &[-3, 6]]);
        for zx in -20..=20 {
            for zy in -8..=8 {
                let z = vec![rat(zx, 2), rat(zy, 2)];
                let got = theta(&k, &z).unwrap();
                let (want, want_arg) = brute_force(&k, &z, 5);
                assert_eq!(got.value, want, "z = ({zx}/2, {zy}/2)");
                assert_eq!(got.argmin, want_arg, "z = ({zx}/2, {zy}/2)");
            }
        }
    }
}
