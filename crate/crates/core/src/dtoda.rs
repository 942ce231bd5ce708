//! The discrete-time periodic Toda lattice in exact rational arithmetic,
//! its Lax characteristic polynomial, and the harness that checks the
//! ultra-discretization limit against the piecewise-linear system.
//!
//! The evolution uses the subtraction-free rewritten form, which keeps
//! positivity manifest; equality with the raw update rule is a property
//! test. The limit harness exponentiates a phase-space point at scale
//! `e^{-X/eps}` and measures how fast `-eps log(.)` of the discrete data
//! approaches the ultra-discrete trajectory and invariants.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::real::{Real, RealCtx};
use crate::udtoda::{check_genus, evolve_step, invariants, UdState};

/// Default precision of the limit harness, in decimal digits.
pub const DEFAULT_DIGITS: usize = 50;

/// A state of the discrete lattice: positive `I`, `V` with `prod I > prod V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteState {
    g: usize,
    i: Vec<Rat>,
    v: Vec<Rat>,
}

impl DiscreteState {
    pub fn new(g: usize, i: Vec<Rat>, v: Vec<Rat>) -> Result<Self> {
        check_genus(g)?;
        if i.len() != g + 1 || v.len() != g + 1 {
            return Err(Error::InvalidState(format!(
                "expected {} sites, got |I|={} |V|={}",
                g + 1,
                i.len(),
                v.len()
            )));
        }
        if i.iter().chain(v.iter()).any(|x| *x <= Rat::zero()) {
            return Err(Error::InvalidState("all entries must be positive".into()));
        }
        let pi: Rat = i.iter().product();
        let pv: Rat = v.iter().product();
        if pi <= pv {
            return Err(Error::InvalidState(
                "prod(I) > prod(V) must hold strictly".into(),
            ));
        }
        Ok(DiscreteState { g, i, v })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn i(&self) -> &[Rat] {
        &self.i
    }

    pub fn v(&self) -> &[Rat] {
        &self.v
    }
}

fn cyc(n: i64, len: usize) -> usize {
    n.rem_euclid(len as i64) as usize
}

/// One step of the subtraction-free update:
/// `I'_n = V_n + I_n (1 - prodV/prodI) / (1 + sum of V/I prefix products)`,
/// `V'_n = I_{n+1} V_n / I'_n`.
pub fn d_evolve(s: &DiscreteState) -> DiscreteState {
    let sites = s.g + 1;
    let pi: Rat = s.i.iter().product();
    let pv: Rat = s.v.iter().product();
    let ratio = &pv / &pi;
    let mut i2 = Vec::with_capacity(sites);
    let mut v2 = Vec::with_capacity(sites);
    for n in 0..sites as i64 {
        let mut denom = Rat::one();
        let mut prefix = Rat::one();
        for l in 1..=s.g as i64 {
            prefix = prefix * &s.v[cyc(n - l, sites)] / &s.i[cyc(n - l, sites)];
            denom += &prefix;
        }
        let inew = &s.v[cyc(n, sites)]
            + &s.i[cyc(n, sites)] * (Rat::one() - &ratio) / denom;
        let vnew = &s.i[cyc(n + 1, sites)] * &s.v[cyc(n, sites)] / &inew;
        i2.push(inew);
        v2.push(vnew);
    }
    let out = DiscreteState {
        g: s.g,
        i: i2,
        v: v2,
    };
    debug_assert!(
        out.i.iter().product::<Rat>() > out.v.iter().product::<Rat>(),
        "positivity cone is invariant"
    );
    out
}

/// Coefficients of the spectral polynomial
/// `f(x,y) = y^2 + y (x^{g+1} + c_g x^g + ... + c_0) + c_{-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    g: usize,
    c: Vec<Rat>,
}

impl CharPoly {
    /// `c_i` for `-1 <= i <= g`.
    pub fn c_at(&self, i: i64) -> &Rat {
        &self.c[(i + 1) as usize]
    }

    /// The list `c_{-1}, c_0, ..., c_g`.
    pub fn c(&self) -> &[Rat] {
        &self.c
    }
}

/// Sparse bivariate Laurent polynomial in `(x, y)`.
type Poly = BTreeMap<(i64, i64), Rat>;

fn p_const(r: Rat) -> Poly {
    let mut p = Poly::new();
    if !r.is_zero() {
        p.insert((0, 0), r);
    }
    p
}

fn p_mono(xd: i64, yd: i64, r: Rat) -> Poly {
    let mut p = Poly::new();
    if !r.is_zero() {
        p.insert((xd, yd), r);
    }
    p
}

fn p_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (k, v) in b {
        let e = out.entry(*k).or_insert_with(Rat::zero);
        *e += v;
        if e.is_zero() {
            out.remove(k);
        }
    }
    out
}

fn p_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for ((xa, ya), ca) in a {
        for ((xb, yb), cb) in b {
            let k = (xa + xb, ya + yb);
            let e = out.entry(k).or_insert_with(Rat::zero);
            *e += ca * cb;
            if e.is_zero() {
                out.remove(&k);
            }
        }
    }
    out
}

fn p_neg(a: &Poly) -> Poly {
    a.iter().map(|(k, v)| (*k, -v)).collect()
}

/// Determinant of the minor with the given live rows and columns, by
/// expansion along the first live column. The matrices here are at most
/// 7x7 and mostly empty.
fn det_minor(m: &[Vec<Poly>], rows: &[usize], cols: &[usize]) -> Poly {
    if rows.is_empty() {
        return p_const(Rat::one());
    }
    let col = cols[0];
    let rest_cols: Vec<usize> = cols[1..].to_vec();
    let mut acc = Poly::new();
    for (pos, &r) in rows.iter().enumerate() {
        let entry = &m[r][col];
        if entry.is_empty() {
            continue;
        }
        let rest_rows: Vec<usize> = rows
            .iter()
            .copied()
            .filter(|&x| x != r)
            .collect();
        let sub = det_minor(m, &rest_rows, &rest_cols);
        let term = p_mul(entry, &sub);
        acc = p_add(&acc, &(if pos % 2 == 0 { term } else { p_neg(&term) }));
    }
    acc
}

/// Expands `y det(x I + L(y))` symbolically and extracts the coefficients.
/// The result is asserted to have exactly the spectral-polynomial shape,
/// with every `c_i` positive (which the limit harness requires).
pub fn char_poly(s: &DiscreteState) -> CharPoly {
    let g = s.g;
    let sites = g + 1;
    // a_n = I_{n+1} + V_n, b_n = I_n V_n (1-based n)
    let a = |n: usize| -> Rat { &s.i[cyc(n as i64 + 1, sites)] + &s.v[cyc(n as i64, sites)] };
    let b = |n: usize| -> Rat { &s.i[cyc(n as i64, sites)] * &s.v[cyc(n as i64, sites)] };

    let sign = if g % 2 == 0 { Rat::one() } else { -Rat::one() };
    let mut m: Vec<Vec<Poly>> = vec![vec![Poly::new(); sites]; sites];
    for r in 0..sites {
        m[r][r] = p_add(&p_mono(1, 0, Rat::one()), &p_const(a(r + 1)));
        if r + 1 < sites {
            m[r][r + 1] = p_const(Rat::one());
        }
        if r >= 1 {
            m[r][r - 1] = p_const(b(r + 1));
        }
    }
    // corner entries carry the spectral parameter
    m[0][sites - 1] = p_add(&m[0][sites - 1], &p_mono(0, -1, &sign * b(1)));
    m[sites - 1][0] = p_add(&m[sites - 1][0], &p_mono(0, 1, sign));

    let all: Vec<usize> = (0..sites).collect();
    let det = det_minor(&m, &all, &all);
    let f = p_mul(&p_mono(0, 1, Rat::one()), &det);

    let mut c = vec![Rat::zero(); g + 2];
    for ((xd, yd), coef) in &f {
        match (xd, yd) {
            (0, 2) => assert!(coef.is_one(), "y^2 coefficient must be 1"),
            (xd, 1) if *xd == sites as i64 => {
                assert!(coef.is_one(), "leading x coefficient must be 1")
            }
            (xd, 1) if (0..sites as i64).contains(xd) => c[(xd + 1) as usize] = coef.clone(),
            (0, 0) => c[0] = coef.clone(),
            other => panic!("unexpected monomial {other:?} in spectral polynomial"),
        }
    }
    assert!(
        c.iter().all(|ci| ci.is_positive()),
        "spectral coefficients must be positive"
    );
    CharPoly { g, c }
}

/// `-eps log x` at roughly `digits` significant decimal digits.
pub fn log_eps(x: &Rat, eps: &Rat, digits: usize) -> Result<Real> {
    if *x <= Rat::zero() {
        return Err(Error::NonPositive(format!("log of {x}")));
    }
    if *eps <= Rat::zero() {
        return Err(Error::NonPositive(format!("eps = {eps}")));
    }
    let ctx = RealCtx::with_digits(digits);
    let lx = ctx.ln(&ctx.from_rat(x))?;
    Ok(ctx.mul(&ctx.neg(&lx), &ctx.from_rat(eps)))
}

/// The exponentiated image of a phase-space point at scale `eps`, with
/// every entry rationalized at working precision.
fn exponentiate(ctx: &RealCtx, state: &UdState, eps: &Rat) -> Result<DiscreteState> {
    let eps_r = ctx.from_rat(eps);
    let conv = |x: &Rat| -> Rat {
        ctx.exp(&ctx.div(&ctx.neg(&ctx.from_rat(x)), &eps_r)).to_rat()
    };
    DiscreteState::new(
        state.genus(),
        state.q().iter().map(&conv).collect(),
        state.w().iter().map(&conv).collect(),
    )
}

/// One evolution step carried out in working-precision reals.
fn d_evolve_real(ctx: &RealCtx, i: &[Real], v: &[Real]) -> (Vec<Real>, Vec<Real>) {
    let sites = i.len();
    let prod = |xs: &[Real]| xs.iter().fold(ctx.one(), |acc, x| ctx.mul(&acc, x));
    let ratio = ctx.div(&prod(v), &prod(i));
    let one_minus = ctx.sub(&ctx.one(), &ratio);
    let mut i2 = Vec::with_capacity(sites);
    let mut v2 = Vec::with_capacity(sites);
    for n in 0..sites as i64 {
        let mut denom = ctx.one();
        let mut prefix = ctx.one();
        for l in 1..sites as i64 {
            prefix = ctx.div(
                &ctx.mul(&prefix, &v[cyc(n - l, sites)]),
                &i[cyc(n - l, sites)],
            );
            denom = ctx.add(&denom, &prefix);
        }
        let inew = ctx.add(
            &v[cyc(n, sites)],
            &ctx.div(&ctx.mul(&i[cyc(n, sites)], &one_minus), &denom),
        );
        let vnew = ctx.div(&ctx.mul(&i[cyc(n + 1, sites)], &v[cyc(n, sites)]), &inew);
        i2.push(inew);
        v2.push(vnew);
    }
    (i2, v2)
}

/// One row of the trajectory comparison table.
#[derive(Debug, Clone)]
pub struct TrajectoryRow {
    pub eps: Rat,
    pub t: usize,
    pub n: usize,
    pub i_dec: String,
    pub v_dec: String,
    pub err_q: f64,
    pub err_w: f64,
}

/// Result of [`ud_trajectory_compare`]: the full table plus, per `eps`,
/// the sup over sites and steps of the trajectory errors.
#[derive(Debug, Clone)]
pub struct TrajectoryReport {
    pub digits: usize,
    pub rows: Vec<TrajectoryRow>,
    pub sup: Vec<(Rat, f64, f64)>,
}

/// Evolves the exponentiated state and the piecewise-linear state side by
/// side and reports `sup_n,t |-eps log I_n^t - Q_n^t|` (and the `W`
/// counterpart) for each `eps`.
pub fn ud_trajectory_compare(
    state: &UdState,
    eps_list: &[Rat],
    steps: usize,
    digits: usize,
) -> Result<TrajectoryReport> {
    let ctx = RealCtx::with_digits(digits);
    let mut rows = Vec::new();
    let mut sup = Vec::new();
    for eps in eps_list {
        if *eps <= Rat::zero() {
            return Err(Error::NonPositive(format!("eps = {eps}")));
        }
        let eps_r = ctx.from_rat(eps);
        let init = exponentiate(&ctx, state, eps)?;
        let mut di: Vec<Real> = init.i().iter().map(|x| ctx.from_rat(x)).collect();
        let mut dv: Vec<Real> = init.v().iter().map(|x| ctx.from_rat(x)).collect();
        let mut ud = state.clone();
        let mut worst_q = 0.0f64;
        let mut worst_w = 0.0f64;
        for t in 0..=steps {
            for n in 0..state.sites() {
                let lq = ctx.mul(&ctx.neg(&ctx.ln(&di[n])?), &eps_r);
                let lw = ctx.mul(&ctx.neg(&ctx.ln(&dv[n])?), &eps_r);
                let err_q = ctx
                    .abs(&ctx.sub(&lq, &ctx.from_rat(&ud.q()[n])))
                    .to_f64();
                let err_w = ctx
                    .abs(&ctx.sub(&lw, &ctx.from_rat(&ud.w()[n])))
                    .to_f64();
                worst_q = worst_q.max(err_q);
                worst_w = worst_w.max(err_w);
                rows.push(TrajectoryRow {
                    eps: eps.clone(),
                    t,
                    n: n + 1,
                    i_dec: di[n].to_decimal_string(),
                    v_dec: dv[n].to_decimal_string(),
                    err_q,
                    err_w,
                });
            }
            if t < steps {
                let (i2, v2) = d_evolve_real(&ctx, &di, &dv);
                di = i2;
                dv = v2;
                ud = evolve_step(&ud);
            }
        }
        sup.push((eps.clone(), worst_q, worst_w));
    }
    Ok(TrajectoryReport {
        digits,
        rows,
        sup,
    })
}

/// One row of the invariant-consistency table.
#[derive(Debug, Clone)]
pub struct CharRow {
    pub eps: Rat,
    pub i: i64,
    pub err: f64,
}

/// Result of [`ud_char_consistency`].
#[derive(Debug, Clone)]
pub struct CharReport {
    pub digits: usize,
    pub rows: Vec<CharRow>,
    pub sup: Vec<(Rat, f64)>,
}

/// For each `eps`: exponentiates the state, computes the exact spectral
/// coefficients of the image, and reports `|-eps log c_i - C_i|`. This is
/// the oracle pinning the min-plus invariant formulas to the Lax matrix.
pub fn ud_char_consistency(
    state: &UdState,
    eps_list: &[Rat],
    digits: usize,
) -> Result<CharReport> {
    let ctx = RealCtx::with_digits(digits);
    let cs = invariants(state);
    let mut rows = Vec::new();
    let mut sup = Vec::new();
    for eps in eps_list {
        if *eps <= Rat::zero() {
            return Err(Error::NonPositive(format!("eps = {eps}")));
        }
        let ds = exponentiate(&ctx, state, eps)?;
        let cp = char_poly(&ds);
        let eps_r = ctx.from_rat(eps);
        let mut worst = 0.0f64;
        for i in -1..=state.genus() as i64 {
            let lc = ctx.mul(&ctx.neg(&ctx.ln(&ctx.from_rat(cp.c_at(i)))?), &eps_r);
            let err = ctx
                .abs(&ctx.sub(&lc, &ctx.from_rat(&cs.c_at(i))))
                .to_f64();
            worst = worst.max(err);
            rows.push(CharRow {
                eps: eps.clone(),
                i,
                err,
            });
        }
        sup.push((eps.clone(), worst));
    }
    Ok(CharReport {
        digits,
        rows,
        sup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num::ToPrimitive;

    fn dstate(g: usize, i: &[i64], v: &[i64]) -> DiscreteState {
        DiscreteState::new(
            g,
            i.iter().map(|x| rat_i(*x)).collect(),
            v.iter().map(|x| rat_i(*x)).collect(),
        )
        .unwrap()
    }

    fn ustate(g: usize, q: &[i64], w: &[i64]) -> UdState {
        UdState::new(
            g,
            q.iter().map(|x| rat_i(*x)).collect(),
            w.iter().map(|x| rat_i(*x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_boundary_states() {
        assert!(DiscreteState::new(1, vec![rat_i(2), rat_i(2)], vec![rat_i(2), rat_i(2)]).is_err());
        assert!(DiscreteState::new(1, vec![rat_i(0), rat_i(2)], vec![rat_i(1), rat_i(1)]).is_err());
    }

    #[test]
    fn evolve_hand_example() {
        let s = dstate(1, &[4, 2], &[1, 1]);
        let s2 = d_evolve(&s);
        assert_eq!(s2.i()[0], rat(10, 3));
        // V'_1 = I_2 V_1 / I'_1
        assert_eq!(s2.v()[0], rat_i(2) * rat_i(1) / rat(10, 3));
    }

    #[test]
    fn products_conserved() {
        let s = dstate(1, &[2, 2], &[1, 1]);
        let s2 = d_evolve(&s);
        let before: Rat = s.i().iter().chain(s.v()).product();
        let after: Rat = s2.i().iter().chain(s2.v()).product();
        assert_eq!(before, after);
        assert_eq!(before, rat_i(4));
    }

    #[test]
    fn char_poly_hand_example() {
        let s = dstate(1, &[4, 2], &[1, 1]);
        let cp = char_poly(&s);
        assert_eq!(cp.c_at(-1), &rat_i(8));
        assert_eq!(cp.c_at(0), &rat_i(9));
        assert_eq!(cp.c_at(1), &rat_i(8));
    }

    #[test]
    fn char_poly_corner_term() {
        for (g, i, v) in [
            (2usize, vec![3i64, 4, 5], vec![1i64, 2, 1]),
            (3, vec![3, 4, 5, 6], vec![1, 2, 1, 1]),
        ] {
            let s = dstate(g, &i, &v);
            let cp = char_poly(&s);
            let want: Rat = s.i().iter().chain(s.v()).product();
            assert_eq!(cp.c_at(-1), &want, "c_-1 = prod I_n V_n at g={g}");
        }
    }

    #[test]
    fn char_poly_conserved_under_evolution() {
        for (g, i, v) in [
            (1usize, vec![5i64, 3], vec![2i64, 1]),
            (2, vec![4, 7, 3], vec![1, 2, 3]),
            (3, vec![9, 4, 6, 5], vec![2, 1, 3, 1]),
            (4, vec![9, 4, 6, 5, 7], vec![2, 1, 3, 1, 2]),
        ] {
            let s = dstate(g, &i, &v);
            let mut cur = s.clone();
            let cp = char_poly(&s);
            for _ in 0..4 {
                cur = d_evolve(&cur);
                assert_eq!(char_poly(&cur), cp, "isolevel property at g={g}");
            }
        }
    }

    #[test]
    fn rewritten_form_matches_raw_update() {
        // I'_n = I_n + V_n - V'_{n-1} and V'_n = I_{n+1} V_n / I'_n
        let s = dstate(2, &[5, 8, 4], &[2, 1, 3]);
        let s2 = d_evolve(&s);
        let sites = 3;
        for n in 0..sites {
            let prev = (n + sites - 1) % sites;
            assert_eq!(
                s2.i()[n],
                &s.i()[n] + &s.v()[n] - &s2.v()[prev],
                "raw update at site {n}"
            );
            assert_eq!(
                s2.v()[n],
                &s.i()[(n + 1) % sites] * &s.v()[n] / &s2.i()[n]
            );
        }
    }

    #[test]
    fn log_eps_behaviour() {
        // x encoding e^{-3/eps}: recovery of the exponent
        let eps = rat(1, 10);
        let ctx = RealCtx::with_digits(50);
        let x = ctx.exp(&ctx.from_rat(&rat_i(-30))).to_rat();
        let rec = log_eps(&x, &eps, 50).unwrap();
        assert!((rec.to_f64() - 3.0).abs() < 1e-30);
        // x = 1 -> 0
        assert_eq!(log_eps(&rat_i(1), &eps, 50).unwrap().to_f64(), 0.0);
        // halving eps halves the value for fixed x
        let a = log_eps(&rat_i(5), &rat(1, 2), 50).unwrap().to_f64();
        let b = log_eps(&rat_i(5), &rat(1, 4), 50).unwrap().to_f64();
        assert!((a - 2.0 * b).abs() < 1e-12);
        assert!(log_eps(&rat_i(0), &eps, 50).is_err());
        assert!(log_eps(&rat_i(2), &rat_i(0), 50).is_err());
    }

    #[test]
    fn ud_limit_of_scalar_relations() {
        // a+b=c gives min[A,B]=C, ab=c gives A+B=C, a-b=c gives A=C (A<B)
        let ctx = RealCtx::with_digits(50);
        let (aa, bb) = (rat(3, 2), rat(5, 2));
        for eps in [rat(1, 2), rat(1, 10), rat(1, 50)] {
            let er = ctx.from_rat(&eps);
            let enc = |x: &Rat| ctx.exp(&ctx.div(&ctx.neg(&ctx.from_rat(x)), &er));
            let dec = |x: &Real| -> f64 {
                ctx.mul(&ctx.neg(&ctx.ln(x).unwrap()), &er).to_f64()
            };
            let (a, b) = (enc(&aa), enc(&bb));
            let sum = dec(&ctx.add(&a, &b));
            assert!((sum - 1.5).abs() < 0.2 * eps.to_f64().unwrap(), "min rule at {eps}");
            let prod = dec(&ctx.mul(&a, &b));
            assert!((prod - 4.0).abs() < 1e-30, "plus rule at {eps}");
            let diff = dec(&ctx.sub(&a, &b));
            assert!((diff - 1.5).abs() < 0.2 * eps.to_f64().unwrap(), "cancellation rule");
        }
    }

    #[test]
    fn trajectory_errors_decrease() {
        let state = ustate(1, &[0, 1], &[2, 3]);
        let eps = vec![rat(1, 2), rat(1, 10), rat(1, 50)];
        let rep = ud_trajectory_compare(&state, &eps, 10, DEFAULT_DIGITS).unwrap();
        assert_eq!(rep.sup.len(), 3);
        for w in rep.sup.windows(2) {
            assert!(
                w[1].1 < w[0].1 && w[1].2 < w[0].2,
                "errors must decrease along the sweep: {:?}",
                rep.sup
            );
        }
        assert!(rep.sup[2].1 < 0.5 && rep.sup[2].2 < 0.5);

        // steps = 0: only the rationalization noise remains
        let rep0 = ud_trajectory_compare(&state, &eps[..1], 0, DEFAULT_DIGITS).unwrap();
        assert!(rep0.sup[0].1 < 1e-40 && rep0.sup[0].2 < 1e-40);
    }

    #[test]
    fn char_consistency_decreases() {
        let state = ustate(1, &[0, 1], &[2, 3]);
        let eps = vec![rat(1, 2), rat(1, 10), rat(1, 50)];
        let rep = ud_char_consistency(&state, &eps, DEFAULT_DIGITS).unwrap();
        for w in rep.sup.windows(2) {
            assert!(w[1].1 <= w[0].1, "errors decrease: {:?}", rep.sup);
        }
        assert!(rep.sup[2].1 < 0.1, "tight at eps = 1/50: {:?}", rep.sup);
        // c_{-1} is a single monomial: its error is pure precision noise
        for row in rep.rows.iter().filter(|r| r.i == -1) {
            assert!(row.err < 1e-40);
        }
    }

    #[test]
    fn real_and_exact_evolution_agree() {
        let ctx = RealCtx::with_digits(60);
        let s = dstate(2, &[5, 8, 4], &[2, 1, 3]);
        let exact = d_evolve(&s);
        let (ri, rv) = d_evolve_real(
            &ctx,
            &s.i().iter().map(|x| ctx.from_rat(x)).collect::<Vec<_>>(),
            &s.v().iter().map(|x| ctx.from_rat(x)).collect::<Vec<_>>(),
        );
        for n in 0..3 {
            let di = ctx
                .abs(&ctx.sub(&ri[n], &ctx.from_rat(&exact.i()[n])))
                .to_f64();
            let dv = ctx
                .abs(&ctx.sub(&rv[n], &ctx.from_rat(&exact.v()[n])))
                .to_f64();
            assert!(di < 1e-50 && dv < 1e-50);
        }
    }
}
