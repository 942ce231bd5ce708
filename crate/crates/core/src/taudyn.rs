//! The tau-lattice form of the dynamics: quasi-periodic windows, their
//! evolution, the projection back to phase-space states, and the theta
//! solution that makes the time flow a straight line on the Jacobian.
//!
//! A window stores two consecutive time rows `T_n^t, T_n^{t+1}` for
//! `n = 0..g`; every other lattice value is produced by the quasi-periodic
//! extension `T_{n+g+1}^s = T_n^s + a n + b s + c`. All index arithmetic
//! funnels through that one extension, which keeps the off-by-one surface
//! small.

use std::collections::BTreeSet;

use num::Zero;

use crate::curve::CurveData;
use crate::error::{Error, Result};
use crate::rational::{dot_iv, rat, rat_i, Rat};
use crate::theta::{theta, LatticeVec};
use crate::udtoda::{evolve_step, UdState};

/// Quasi-periodicity coefficients: `c_n^s = a n + b s + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiCoef {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl QuasiCoef {
    pub fn at(&self, n: i64, s: i64) -> Rat {
        &self.a * rat_i(n) + &self.b * rat_i(s) + &self.c
    }
}

/// Evaluates `T_n^s` from one stored row at time `s` via the extension rule.
fn extend_row(row: &[Rat], quasi: &QuasiCoef, n: i64, s: i64) -> Rat {
    let period = row.len() as i64;
    let n0 = n.rem_euclid(period);
    let j = (n - n0) / period;
    let mut v = row[n0 as usize].clone();
    if j > 0 {
        for i in 0..j {
            v += quasi.at(n0 + i * period, s);
        }
    } else {
        for i in j..0 {
            v -= quasi.at(n0 + i * period, s);
        }
    }
    v
}

/// A batch of consecutive rows sharing one quasi-periodicity; rows start at
/// time `t_first`.
#[derive(Debug, Clone)]
pub struct TauRows {
    g: usize,
    t_first: i64,
    l_period: Rat,
    quasi: QuasiCoef,
    rows: Vec<Vec<Rat>>,
}

impl TauRows {
    pub fn new(
        g: usize,
        t_first: i64,
        l_period: Rat,
        quasi: QuasiCoef,
        rows: Vec<Vec<Rat>>,
    ) -> Result<Self> {
        crate::udtoda::check_genus(g)?;
        if rows.iter().any(|r| r.len() != g + 1) {
            return Err(Error::Input(format!("rows must have length {}", g + 1)));
        }
        // 2b - a < (g+1) L keeps the projected states inside the phase space
        if &quasi.b * rat_i(2) - &quasi.a >= &l_period * rat_i(g as i64 + 1) {
            return Err(Error::QuasiPeriodicityBroken(
                "2b - a < (g+1)L is violated".into(),
            ));
        }
        Ok(TauRows {
            g,
            t_first,
            l_period,
            quasi,
            rows,
        })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn t_first(&self) -> i64 {
        self.t_first
    }

    pub fn l_period(&self) -> &Rat {
        &self.l_period
    }

    pub fn quasi(&self) -> &QuasiCoef {
        &self.quasi
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    /// `T_n^s` for any integer `n`; `s` must be a stored row time.
    pub fn value(&self, n: i64, s: i64) -> Rat {
        let r = s - self.t_first;
        assert!(
            r >= 0 && (r as usize) < self.rows.len(),
            "row {s} not stored"
        );
        extend_row(&self.rows[r as usize], &self.quasi, n, s)
    }
}

/// One window of the lattice: rows at `t` and `t+1` plus the additive
/// constant `C_g` used by the projection to phase space.
#[derive(Debug, Clone)]
pub struct TauWindow {
    rows: TauRows,
    cg: Rat,
}

impl TauWindow {
    pub fn new(
        g: usize,
        t: i64,
        l_period: Rat,
        cg: Rat,
        quasi: QuasiCoef,
        row_t: Vec<Rat>,
        row_t1: Vec<Rat>,
    ) -> Result<Self> {
        let rows = TauRows::new(g, t, l_period, quasi, vec![row_t, row_t1])?;
        Ok(TauWindow { rows, cg })
    }

    pub fn genus(&self) -> usize {
        self.rows.g
    }

    pub fn t(&self) -> i64 {
        self.rows.t_first
    }

    pub fn l_period(&self) -> &Rat {
        &self.rows.l_period
    }

    pub fn cg(&self) -> &Rat {
        &self.cg
    }

    pub fn quasi(&self) -> &QuasiCoef {
        &self.rows.quasi
    }

    pub fn rows(&self) -> &TauRows {
        &self.rows
    }

    pub fn value(&self, n: i64, s: i64) -> Rat {
        self.rows.value(n, s)
    }
}

/// `X_{n,t}^{(k)}`: the running minimum
/// `min_{j=0..k}[ jL + 2T_{n-j-1}^{t+1} + T_n^t + T_{n-1}^t
///               - (2T_{n-1}^{t+1} + T_{n-j}^t + T_{n-j-1}^t) ]`.
/// The `j = 0` term vanishes, so the result is never positive.
pub fn tau_x(w: &TauWindow, n: i64, k: usize) -> Rat {
    let t = w.t();
    let fixed = w.value(n, t) + w.value(n - 1, t) - w.value(n - 1, t + 1) * rat_i(2);
    let mut best = Rat::zero();
    for j in 0..=k as i64 {
        let term = w.l_period() * rat_i(j) + w.value(n - j - 1, t + 1) * rat_i(2) + &fixed
            - w.value(n - j, t)
            - w.value(n - j - 1, t);
        best = std::cmp::min(best, term);
    }
    best
}

/// One step of the window evolution:
/// `T_n^{t+2} = 2 T_n^{t+1} - T_n^t + X_{n+1,t}^{(g)}`.
///
/// The new row must satisfy the same quasi-periodicity; a violation is
/// reported as an error (it would signal an upstream bug, not bad data).
/// The stabilization `X^{(g+1)} = X^{(g)}` is asserted along the way.
pub fn phi_s(w: &TauWindow) -> Result<TauWindow> {
    let g = w.genus();
    let t = w.t();
    let mut row2 = Vec::with_capacity(g + 1);
    for n in 0..=g as i64 {
        let x = tau_x(w, n + 1, g);
        assert_eq!(
            x,
            tau_x(w, n + 1, g + 1),
            "X must stabilize at k = g; quasi-periodicity constraint broken"
        );
        row2.push(w.value(n, t + 1) * rat_i(2) - w.value(n, t) + x);
    }
    // extension consistency of the fresh row at n = g+1
    let xg = tau_x(w, g as i64 + 2, g);
    let direct = w.value(g as i64 + 1, t + 1) * rat_i(2) - w.value(g as i64 + 1, t) + xg;
    let via_quasi = &row2[0] + w.quasi().at(0, t + 2);
    if direct != via_quasi {
        return Err(Error::QuasiPeriodicityBroken(format!(
            "row t+2 breaks the extension rule: {direct} vs {via_quasi}"
        )));
    }
    let row1 = w.rows.rows[1].clone();
    TauWindow::new(
        g,
        t + 1,
        w.l_period().clone(),
        w.cg.clone(),
        w.quasi().clone(),
        row1,
        row2,
    )
}

/// Projects a window onto a phase-space state:
/// `W_n = L + T_{n-1}^{t+1} + T_{n+1}^t - T_n^t - T_n^{t+1} + C_g`,
/// `Q_n = T_{n-1}^t + T_n^{t+1} - T_{n-1}^{t+1} - T_n^t + C_g`.
pub fn sigma(w: &TauWindow) -> Result<UdState> {
    let g = w.genus();
    let t = w.t();
    let mut q = Vec::with_capacity(g + 1);
    let mut wv = Vec::with_capacity(g + 1);
    for n in 1..=g as i64 + 1 {
        wv.push(
            w.l_period() + w.value(n - 1, t + 1) + w.value(n + 1, t)
                - w.value(n, t)
                - w.value(n, t + 1)
                + &w.cg,
        );
        q.push(
            w.value(n - 1, t) + w.value(n, t + 1) - w.value(n - 1, t + 1) - w.value(n, t) + &w.cg,
        );
    }
    UdState::new(g, q, wv)
}

/// Checks the bilinear relation
/// `T_n^{t-1} + T_n^{t+1} = min[2 T_n^t, T_{n-1}^{t+1} + T_{n+1}^{t-1} + L]`
/// over one period, for a three-row batch.
pub fn bilinear_check(rows: &TauRows) -> Result<bool> {
    if rows.rows.len() != 3 {
        return Err(Error::Input("exactly three rows required".into()));
    }
    let t = rows.t_first + 1;
    for n in 0..=rows.g as i64 {
        let lhs = rows.value(n, t - 1) + rows.value(n, t + 1);
        let rhs = std::cmp::min(
            rows.value(n, t) * rat_i(2),
            rows.value(n - 1, t + 1) + rows.value(n + 1, t - 1) + rows.l_period(),
        );
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The residues `n mod g+1` where the first branch of the bilinear minimum
/// is attained, `T_n^t + T_n^{t+2} = 2 T_n^{t+1}`. Rows must satisfy the
/// bilinear relation; the set is never empty for a valid batch.
pub fn a_set(rows: &TauRows) -> Result<BTreeSet<usize>> {
    if !bilinear_check(rows)? {
        return Err(Error::Precondition(
            "rows do not satisfy the bilinear relation".into(),
        ));
    }
    let t = rows.t_first;
    let mut set = BTreeSet::new();
    for n in 0..=rows.g as i64 {
        if rows.value(n, t) + rows.value(n, t + 2) == rows.value(n, t + 1) * rat_i(2) {
            set.insert(n as usize);
        }
    }
    if set.is_empty() {
        return Err(Error::EmptyASet(
            "no site attains the quadratic branch".into(),
        ));
    }
    Ok(set)
}

/// The theta solution: `T_n^s = Theta(Z_0 - n L e_1 + s lambda_vec)` rows at
/// `s = t, t+1`, with the quasi-periodicity coefficients in closed form:
/// `a = -gL`, `b = gbar . lambda_vec`, `c = gbar . Z_0 - g(g+1)L/2`.
pub fn iota(cd: &CurveData, z0: &[Rat], t: i64) -> Result<TauWindow> {
    let g = cd.genus();
    if z0.len() != g {
        return Err(Error::DimensionMismatch(format!(
            "Z_0 must have length {g}"
        )));
    }
    let gbar = LatticeVec::gbar(g);
    let a = -(cd.l_period() * rat_i(g as i64));
    let b = dot_iv(&gbar.0, cd.lambda_vec());
    let c = dot_iv(&gbar.0, z0) - cd.l_period() * rat(g as i64 * (g as i64 + 1), 2);
    let quasi = QuasiCoef { a, b, c };
    // (g+1)L - 2b + a = p_g > 0; equivalent to the window admissibility
    assert_eq!(
        cd.l_period() * rat_i(g as i64 + 1) - &quasi.b * rat_i(2) + &quasi.a,
        cd.p_at(g),
        "window margin equals p_g"
    );

    let theta_row = |s: i64| -> Vec<Rat> {
        (0..=g as i64)
            .map(|n| {
                let mut z = z0.to_vec();
                z[0] -= cd.l_period() * rat_i(n);
                for (zi, d) in z.iter_mut().zip(cd.lambda_vec()) {
                    *zi += d * rat_i(s);
                }
                theta(cd.k(), &z).expect("dims agree").value
            })
            .collect()
    };
    let row_t = theta_row(t);
    let row_t1 = theta_row(t + 1);
    let w = TauWindow::new(
        g,
        t,
        cd.l_period().clone(),
        cd.invariants().c_at(g as i64),
        quasi,
        row_t,
        row_t1,
    )?;
    // the rows really are quasi-periodic: probe the extension at n = g+1
    debug_assert_eq!(
        {
            let mut z = z0.to_vec();
            z[0] -= cd.l_period() * rat_i(g as i64 + 1);
            for (zi, d) in z.iter_mut().zip(cd.lambda_vec()) {
                *zi += d * rat_i(t);
            }
            theta(cd.k(), &z).unwrap().value
        },
        w.value(g as i64 + 1, t),
        "theta rows satisfy the extension rule"
    );
    Ok(w)
}

/// Verifies `phi_T^s(sigma(iota(Z_0, 0))) = sigma(iota(Z_0, s))` for
/// `s = 1..steps`: the time flow is the straight-line translation by
/// `lambda_vec` on the Jacobian.
pub fn translation_flow_check(cd: &CurveData, z0: &[Rat], steps: usize) -> Result<bool> {
    let mut state = sigma(&iota(cd, z0, 0)?)?;
    let mut window = iota(cd, z0, 0)?;
    for s in 1..=steps as i64 {
        state = evolve_step(&state);
        window = phi_s(&window)?;
        let via_iota = sigma(&iota(cd, z0, s)?)?;
        let via_phi_s = sigma(&window)?;
        if state != via_iota || state != via_phi_s {
            return Ok(false);
        }
    }
    Ok(true)
}
