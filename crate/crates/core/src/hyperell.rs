//! Desk-scale numeric validation of the hyperelliptic limit: the spectral
//! curve in its standard form `v^2 = Delta(u)^2 - 4 c_{-1}` at scale
//! `c_i = e^{-C_i/eps}`, root scaling towards the tropical breakpoints, and
//! period integrals converging (after `-2 pi i eps` rescaling) to the period
//! matrix in the nested cycle basis, `TKT`.
//!
//! All computation here runs in high-precision floating point; branch-point
//! singularities are integrable but stiff, so the quadrature is tanh-sinh
//! with exact distance-to-endpoint bookkeeping, and `Delta^2 - 4c_{-1}` is
//! evaluated in factored form from its computed roots.

use num::{ToPrimitive, Zero};

use crate::curve::{CurveData, MetricGraph};
use crate::error::{Error, Result};
use crate::matrix::{mat_mul, Mat};
use crate::rational::{rat_i, Rat};
use crate::real::{Real, RealCtx};
use crate::udtoda::{is_generic, SpectralInvariants};

/// Default working precision of the appendix harness, in decimal digits.
pub const DEFAULT_DIGITS: usize = 60;

/// The exponentiated spectral curve at one `eps`, with all roots of
/// `Delta` and of `Delta^2 - 4 c_{-1}` isolated and refined.
pub struct ScaledCurve {
    g: usize,
    inv: SpectralInvariants,
    eps: Rat,
    digits: usize,
    ctx: RealCtx,
    /// `c_{-1}, c_0, ..., c_g` as reals (and the implicit monic `c_{g+1}=1`).
    c: Vec<Real>,
    /// tropical root predictions `X_j = C_j - C_{j+1}`, descending in j
    x_trop: Vec<Rat>,
    /// roots `u_0 < ... < u_g` of `Delta`
    u: Vec<Real>,
    /// roots `(u_j^{-1}, u_j^{+1})` of `Delta^2 - 4c_{-1}`, interlacing `u_j`
    upm: Vec<(Real, Real)>,
}

fn coeff_sign(i: i64) -> Rat {
    if i % 2 == 0 {
        rat_i(1)
    } else {
        rat_i(-1)
    }
}

impl ScaledCurve {
    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn eps(&self) -> &Rat {
        &self.eps
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn ctx(&self) -> &RealCtx {
        &self.ctx
    }

    pub fn roots(&self) -> &[Real] {
        &self.u
    }

    pub fn roots_pm(&self) -> &[(Real, Real)] {
        &self.upm
    }

    /// `Delta(u) = sum_i (-1)^i c_i u^i` by Horner evaluation.
    pub fn delta(&self, u: &Real) -> Real {
        let cx = &self.ctx;
        // coefficients ordered by descending degree: (-1)^{g+1} u^{g+1} + ...
        let mut acc = cx.from_rat(&coeff_sign(self.g as i64 + 1));
        for i in (0..=self.g as i64).rev() {
            let ci = cx.mul(
                &cx.from_rat(&coeff_sign(i)),
                &self.c[(i + 1) as usize],
            );
            acc = cx.add(&cx.mul(&acc, u), &ci);
        }
        acc
    }

    /// `Delta(u)^2 - 4 c_{-1}` from coefficients (used for root isolation).
    fn dpoly(&self, u: &Real) -> Real {
        let cx = &self.ctx;
        let d = self.delta(u);
        cx.sub(&cx.mul(&d, &d), &cx.mul(&cx.from_i64(4), &self.c[0]))
    }

    /// All `2g+2` roots of `Delta^2 - 4c_{-1}` in ascending order.
    fn all_pm_roots(&self) -> Vec<Real> {
        let mut out = Vec::with_capacity(2 * self.g + 2);
        for (lo, hi) in &self.upm {
            out.push(lo.clone());
            out.push(hi.clone());
        }
        out
    }

    /// `-eps ln x`.
    fn ud_log(&self, x: &Real) -> Result<Real> {
        let cx = &self.ctx;
        Ok(cx.mul(&cx.neg(&cx.ln(x)?), &cx.from_rat(&self.eps)))
    }
}

fn bisect<F: Fn(&Real) -> Real>(
    ctx: &RealCtx,
    f: F,
    mut lo: Real,
    mut hi: Real,
    max_iter: usize,
) -> Result<Real> {
    let flo = f(&lo);
    let fhi = f(&hi);
    if flo.is_zero() {
        return Ok(lo);
    }
    if fhi.is_zero() {
        return Ok(hi);
    }
    if flo.is_negative() == fhi.is_negative() {
        return Err(Error::RootOrderingFailed(
            "no sign change in bracket; decrease eps or raise precision".into(),
        ));
    }
    let lo_neg = flo.is_negative();
    for _ in 0..max_iter {
        let mid = ctx.mul(&ctx.add(&lo, &hi), &ctx.from_f64(0.5));
        if mid.cmp(&lo) == std::cmp::Ordering::Equal
            || mid.cmp(&hi) == std::cmp::Ordering::Equal
        {
            break; // precision floor reached
        }
        let fm = f(&mid);
        if fm.is_zero() {
            return Ok(mid);
        }
        if fm.is_negative() == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ctx.mul(&ctx.add(&lo, &hi), &ctx.from_f64(0.5)))
}

/// Builds the scaled curve: exponentiates the invariants, isolates the
/// roots of `Delta` inside brackets predicted by the tropical breakpoints,
/// then interlaces the roots of `Delta^2 - 4c_{-1}` around them. Failure of
/// any ordering or interlacing check reports `eps` as too large.
pub fn scaled_curve(inv: &SpectralInvariants, eps: &Rat, digits: usize) -> Result<ScaledCurve> {
    if !is_generic(inv) {
        return Err(Error::NotGeneric("scaled curve needs generic C".into()));
    }
    if *eps <= Rat::zero() {
        return Err(Error::NonPositive(format!("eps = {eps}")));
    }
    let g = inv.genus();
    // C_i + C_j > C_{i+1} + C_{j-1}: the pairwise convexity the root
    // analysis relies on; a direct consequence of the generic condition.
    for i in 0..=g as i64 {
        for j in i + 2..=g as i64 {
            assert!(
                inv.c_at(i) + inv.c_at(j) > inv.c_at(i + 1) + inv.c_at(j - 1),
                "pairwise convexity must follow from genericity"
            );
        }
    }

    let ctx = RealCtx::with_digits(digits);
    let eps_r = ctx.from_rat(eps);
    let c: Vec<Real> = (-1..=g as i64)
        .map(|i| ctx.exp(&ctx.div(&ctx.neg(&ctx.from_rat(&inv.c_at(i))), &eps_r)))
        .collect();
    // X_j = C_j - C_{j+1} with C_{g+1} = 0, descending in j
    let x_trop: Vec<Rat> = (0..=g as i64).map(|j| inv.c_at(j) - inv.c_at(j + 1)).collect();

    let sc_partial = ScaledCurve {
        g,
        inv: inv.clone(),
        eps: eps.clone(),
        digits,
        ctx,
        c,
        x_trop: x_trop.clone(),
        u: Vec::new(),
        upm: Vec::new(),
    };
    let cx = &sc_partial.ctx;

    // Brackets in X-space: X_j +- half the gap to the neighbouring root.
    let from_x = |x: f64| -> Real {
        cx.exp(&cx.div(&cx.from_f64(-x), &cx.from_rat(eps)))
    };
    let xf: Vec<f64> = x_trop.iter().map(|x| x.to_f64().unwrap()).collect();
    let mut u_roots = Vec::with_capacity(g + 1);
    for j in 0..=g {
        // smaller u means larger X: the bracket below u_j is bounded by
        // X_{j-1}, the one above by X_{j+1}
        let gap_lo = if j == 0 { 1.0 } else { xf[j - 1] - xf[j] };
        let gap_hi = if j == g { 1.0 } else { xf[j] - xf[j + 1] };
        let lo = from_x(xf[j] + gap_lo / 2.0);
        let hi = from_x(xf[j] - gap_hi / 2.0);
        let root = bisect(cx, |u| sc_partial.delta(u), lo, hi, 4 * sc_partial.ctx.bits())?;
        u_roots.push(root);
    }
    for w in u_roots.windows(2) {
        if w[0].cmp(&w[1]) != std::cmp::Ordering::Less {
            return Err(Error::RootOrderingFailed("roots of Delta collide".into()));
        }
    }

    let sc = ScaledCurve {
        u: u_roots,
        ..sc_partial
    };
    let cx = &sc.ctx;

    // D = Delta^2 - 4c_{-1} is negative at each u_j and positive at the
    // geometric midpoints between roots; bisect on both sides of u_j.
    let geo_mid = |a: &Real, b: &Real| -> Result<Real> { cx.sqrt(&cx.mul(a, b)) };
    let mut upm = Vec::with_capacity(g + 1);
    for j in 0..=g {
        let below = if j == 0 {
            cx.div(&sc.u[0], &cx.from_i64(1 << 8))
        } else {
            geo_mid(&sc.u[j - 1], &sc.u[j])?
        };
        let above = if j == g {
            cx.mul(&sc.u[g], &cx.from_i64(1 << 8))
        } else {
            geo_mid(&sc.u[j], &sc.u[j + 1])?
        };
        if !sc.dpoly(&below).is_positive() || !sc.dpoly(&above).is_positive() {
            return Err(Error::RootOrderingFailed(
                "branch cuts overlap; eps too large".into(),
            ));
        }
        let minus = bisect(cx, |u| sc.dpoly(u), below, sc.u[j].clone(), 4 * cx.bits())?;
        let plus = bisect(cx, |u| sc.dpoly(u), sc.u[j].clone(), above, 4 * cx.bits())?;
        upm.push((minus, plus));
    }
    // ordering 0 < u_0^{-1} < u_0^{+1} < u_1^{-1} < ... and interlacing
    let mut prev: Option<Real> = None;
    for (j, (lo, hi)) in upm.iter().enumerate() {
        if !lo.is_positive()
            || lo.cmp(&sc.u[j]) != std::cmp::Ordering::Less
            || sc.u[j].cmp(hi) != std::cmp::Ordering::Less
        {
            return Err(Error::RootOrderingFailed(format!(
                "interlacing fails at cut {j}"
            )));
        }
        if let Some(p) = prev {
            if p.cmp(lo) != std::cmp::Ordering::Less {
                return Err(Error::RootOrderingFailed(format!(
                    "cuts {j} and {} overlap",
                    j - 1
                )));
            }
        }
        prev = Some(hi.clone());
    }
    Ok(ScaledCurve { upm, ..sc })
}

/// Largest deviation of any `-eps log` root image from its tropical
/// prediction `C_j - C_{j+1}`, over `u_j` and both branch-point companions.
pub fn root_limit_error(sc: &ScaledCurve) -> Result<f64> {
    let cx = &sc.ctx;
    let mut worst = 0.0f64;
    for j in 0..=sc.g {
        let want = cx.from_rat(&sc.x_trop[j]);
        for r in [&sc.u[j], &sc.upm[j].0, &sc.upm[j].1] {
            let err = cx.abs(&cx.sub(&sc.ud_log(r)?, &want)).to_f64();
            worst = worst.max(err);
        }
    }
    Ok(worst)
}

/// Integrand data of the normalization differentials: the `j`-th numerator
/// is `N_j(u) = (u_j - u_0) prod_{k != 0,j} (u_k - u)`, placed over
/// `Delta(u)` for the residue form and over `sqrt(Delta^2 - 4c_{-1})` for
/// the curve form.
pub struct OmegaForm {
    pub j: usize,
    pub pole_hi: Real,
    pub pole_lo: Real,
}

pub fn omega0(sc: &ScaledCurve, j: usize) -> Result<OmegaForm> {
    if j == 0 || j > sc.g {
        return Err(Error::Input(format!("omega index {j} outside 1..=g")));
    }
    Ok(OmegaForm {
        j,
        pole_hi: sc.u[j].clone(),
        pole_lo: sc.u[0].clone(),
    })
}

/// Residue of `omega_j^0` at its `u_j` pole, which is identically 1; the
/// computed value differs only by root refinement error.
pub fn omega0_residue(sc: &ScaledCurve, j: usize) -> Result<Real> {
    let form = omega0(sc, j)?;
    let cx = &sc.ctx;
    // N_j(u_j) / Delta'(u_j) with both sides in factored form
    let mut num = cx.sub(&form.pole_hi, &form.pole_lo);
    let mut den = cx.one();
    for k in 0..=sc.g {
        if k != j {
            den = cx.mul(&den, &cx.sub(&sc.u[k], &sc.u[j]));
        }
        if k != j && k != 0 {
            num = cx.mul(&num, &cx.sub(&sc.u[k], &sc.u[j]));
        }
    }
    Ok(cx.div(&num, &cx.neg(&den)))
}

fn n_j(sc: &ScaledCurve, j: usize, u: &Real) -> Real {
    let cx = &sc.ctx;
    let mut out = cx.sub(&sc.u[j], &sc.u[0]);
    for k in 0..=sc.g {
        if k != 0 && k != j {
            out = cx.mul(&out, &cx.sub(&sc.u[k], u));
        }
    }
    out
}

/// `prod (u - r)` over all roots of `Delta^2 - 4c_{-1}` except the two
/// segment endpoints, whose distances arrive pre-computed from the
/// quadrature transform.
fn other_root_product(sc: &ScaledCurve, u: &Real, a: &Real, b: &Real) -> Real {
    let cx = &sc.ctx;
    let mut out = cx.one();
    for r in sc.all_pm_roots() {
        if r.cmp(a) == std::cmp::Ordering::Equal || r.cmp(b) == std::cmp::Ordering::Equal {
            continue;
        }
        out = cx.mul(&out, &cx.sub(u, &r));
    }
    out
}

/// Tanh-sinh quadrature of `f(u, u - a, b - u)` over `[a, b]`, where both
/// endpoints may carry inverse-square-root singularities. Distances to the
/// endpoints are produced without cancellation.
fn tanh_sinh<F>(ctx: &RealCtx, a: &Real, b: &Real, f: F, tol: f64) -> Result<Real>
where
    F: Fn(&Real, &Real, &Real) -> Real,
{
    let width = ctx.sub(b, a);
    let half = ctx.mul(&width, &ctx.from_f64(0.5));
    let lambda = ctx.mul(&ctx.pi(), &ctx.from_f64(0.5));
    let t_max = 7.0f64;

    let eval_at = |t: f64| -> Real {
        let tr = ctx.from_f64(t);
        let x = ctx.mul(&lambda, &ctx.sinh(&tr));
        // u - a = w / (1 + e^{-2x}), b - u = w / (1 + e^{2x})
        let e2x = ctx.exp(&ctx.mul(&x, &ctx.from_i64(2)));
        let em2x = ctx.div(&ctx.one(), &e2x);
        let da = ctx.div(&width, &ctx.add(&ctx.one(), &em2x));
        let db = ctx.div(&width, &ctx.add(&ctx.one(), &e2x));
        let u = ctx.add(a, &da);
        // weight: lambda cosh t / cosh^2(x)
        let ch = ctx.cosh(&x);
        let w = ctx.div(
            &ctx.mul(&lambda, &ctx.cosh(&tr)),
            &ctx.mul(&ch, &ch),
        );
        ctx.mul(&ctx.mul(&w, &f(&u, &da, &db)), &half)
    };

    let mut h = 0.5f64;
    let mut sum = eval_at(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        let t = k as f64 * h;
        sum = ctx.add(&sum, &eval_at(t));
        sum = ctx.add(&sum, &eval_at(-t));
        k += 1;
    }
    let mut best = ctx.mul(&sum, &ctx.from_f64(h));

    for _level in 0..6 {
        let h2 = h / 2.0;
        let mut k = 1;
        while (k as f64) * h2 <= t_max {
            let t = k as f64 * h2;
            sum = ctx.add(&sum, &eval_at(t));
            sum = ctx.add(&sum, &eval_at(-t));
            k += 2;
        }
        let next = ctx.mul(&sum, &ctx.from_f64(h2));
        let change = ctx.abs(&ctx.sub(&next, &best)).to_f64();
        let scale = ctx.abs(&next).to_f64().max(1e-300);
        best = next;
        h = h2;
        if change / scale < tol {
            return Ok(best);
        }
    }
    // accept the deepest level; the acceptance tolerances sit far above
    // the final-halving change monitored above
    Ok(best)
}

/// The `a`-period matrix of the curve differentials: entry `(i, j)` is the
/// circuit integral of the `j`-th differential around cut `i`, normalized
/// to converge to the identity.
pub fn a_period_matrix(sc: &ScaledCurve) -> Result<Vec<Vec<f64>>> {
    let cx = &sc.ctx;
    let mut out = vec![vec![0.0; sc.g]; sc.g];
    for i in 1..=sc.g {
        let (a, b) = (&sc.upm[i].0, &sc.upm[i].1);
        for j in 1..=sc.g {
            let integral = tanh_sinh(
                cx,
                a,
                b,
                |u, da, db| {
                    let num = n_j(sc, j, u);
                    // inside a cut, D < 0; |D| = (u-a)(b-u) * |others|
                    let q = cx.mul(&cx.mul(da, db), &other_root_product(sc, u, a, b));
                    let root = cx.sqrt(&cx.abs(&q)).expect("positive");
                    cx.div(&num, &root)
                },
                1e-18,
            )?;
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            out[i - 1][j - 1] = sign * cx.div(&integral, &cx.pi()).to_f64();
        }
    }
    Ok(out)
}

/// Scaled `b`-period matrix: entry `(i, j)` is
/// `2 eps sum_{s<i} (-1)^s int_{u_s^{+1}}^{u_{s+1}^{-1}} N_j / sqrt(D) du`,
/// which converges to the nested-basis period matrix `TKT`. The companion
/// imaginary residue (the crossings of intermediate cuts) is returned as a
/// diagnostic second matrix.
pub fn b_period_limits(sc: &ScaledCurve) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let cx = &sc.ctx;
    let eps_r = cx.from_rat(&sc.eps);
    let mut real = vec![vec![0.0; sc.g]; sc.g];
    let mut imag = vec![vec![0.0; sc.g]; sc.g];
    for i in 1..=sc.g {
        for j in 1..=sc.g {
            let mut acc = cx.zero();
            for s in 0..i {
                let a = &sc.upm[s].1;
                let b = &sc.upm[s + 1].0;
                let integral = tanh_sinh(
                    cx,
                    a,
                    b,
                    |u, da, db| {
                        let num = n_j(sc, j, u);
                        // between cuts D > 0; D = -(u-a)(b-u) * others
                        let q = cx.neg(&cx.mul(
                            &cx.mul(da, db),
                            &other_root_product(sc, u, a, b),
                        ));
                        let root = cx.sqrt(&cx.abs(&q)).expect("positive");
                        cx.div(&num, &root)
                    },
                    1e-18,
                )?;
                acc = if s % 2 == 0 {
                    cx.add(&acc, &integral)
                } else {
                    cx.sub(&acc, &integral)
                };
            }
            real[i - 1][j - 1] = cx
                .mul(&cx.mul(&acc, &eps_r), &cx.from_i64(2))
                .to_f64();

            // crossings of the interior cuts 1..i-1 contribute imaginary
            // parts that vanish with eps; report their magnitude
            let mut im = cx.zero();
            for s in 1..i {
                let (a, b) = (&sc.upm[s].0, &sc.upm[s].1);
                let integral = tanh_sinh(
                    cx,
                    a,
                    b,
                    |u, da, db| {
                        let num = n_j(sc, j, u);
                        let q = cx.mul(&cx.mul(da, db), &other_root_product(sc, u, a, b));
                        let root = cx.sqrt(&cx.abs(&q)).expect("positive");
                        cx.div(&num, &root)
                    },
                    1e-18,
                )?;
                im = cx.add(&im, &cx.abs(&integral));
            }
            imag[i - 1][j - 1] = cx.mul(&cx.mul(&im, &eps_r), &cx.from_i64(2)).to_f64();
        }
    }
    Ok((real, imag))
}

/// One within-edge segment comparison: the quadrature value of
/// `eps int_{u_a}^{u_b} N_j / sqrt(D) du` against its piecewise-linear
/// limit from the case table (0 or `X_a - X_b` in magnitude).
#[derive(Debug, Clone)]
pub struct SegmentCheck {
    pub band: usize,
    pub j: usize,
    pub computed: f64,
    pub target_magnitude: f64,
}

/// Horizontal-edge segment limits: for points interior to the band between
/// cuts `s` and `s+1` (placed at geometric parameters 0.3 and 0.7), the
/// scaled integral vanishes for `j <= s` and has magnitude `X_a - X_b`
/// for `j > s`.
pub fn segment_limit_checks_u(sc: &ScaledCurve) -> Result<Vec<SegmentCheck>> {
    let cx = &sc.ctx;
    let eps_r = cx.from_rat(&sc.eps);
    let mut out = Vec::new();
    for s in 0..sc.g {
        let xa = 0.7 * sc.x_trop[s].to_f64().unwrap() + 0.3 * sc.x_trop[s + 1].to_f64().unwrap();
        let xb = 0.3 * sc.x_trop[s].to_f64().unwrap() + 0.7 * sc.x_trop[s + 1].to_f64().unwrap();
        let ua = cx.exp(&cx.div(&cx.from_f64(-xa), &eps_r));
        let ub = cx.exp(&cx.div(&cx.from_f64(-xb), &eps_r));
        for j in 1..=sc.g {
            let integral = tanh_sinh(
                cx,
                &ua,
                &ub,
                |u, _da, _db| {
                    // interior of a band: D evaluated in fully factored form
                    let mut q = cx.one();
                    for r in sc.all_pm_roots() {
                        q = cx.mul(&q, &cx.sub(u, &r));
                    }
                    let root = cx.sqrt(&cx.abs(&q)).expect("positive");
                    cx.div(&n_j(sc, j, u), &root)
                },
                1e-18,
            )?;
            let computed = cx.mul(&integral, &eps_r).to_f64();
            let target = if j <= s { 0.0 } else { xa - xb };
            out.push(SegmentCheck {
                band: s,
                j,
                computed,
                target_magnitude: target.abs(),
            });
        }
    }
    Ok(out)
}

/// Vertical-edge segment limits: along the near-cut branch parametrized by
/// `y`, the scaled integral has magnitude `Y_a - Y_b` for `j = i` and for
/// cut 0, and vanishes otherwise.
pub fn segment_limit_checks_y(sc: &ScaledCurve, cd: &CurveData) -> Result<Vec<SegmentCheck>> {
    let cx = &sc.ctx;
    let g = sc.g;
    let eps_r = cx.from_rat(&sc.eps);
    let half_c = sc.inv.c_at(-1).to_f64().unwrap() / 2.0;
    let mut out = Vec::new();
    for i in 0..=g {
        // cut i sits under the vertical edge at lambda_{g-i}; its half
        // height is p_{g-i}/2 with p_0 = L
        let half_len = cd.p_at(g - i).to_f64().unwrap() / 2.0;
        // pick u just right of the cut where Delta is nonzero; the y-branch
        // with |y| < sqrt(c_{-1}) has sign -sign(Delta)
        let solve_u = |y_mag: &Real| -> Result<Real> {
            // sign of y so that w = -(y^2 + c_{-1})/y has the sign of
            // Delta right of the cut
            let probe = cx.mul(&sc.upm[i].1, &cx.from_f64(1.0 + 1e-12));
            let dsign_pos = sc.delta(&probe).is_positive();
            let y = if dsign_pos {
                cx.neg(y_mag)
            } else {
                y_mag.clone()
            };
            let w = cx.neg(&cx.div(
                &cx.add(&cx.mul(&y, &y), &sc.c[0]),
                &y,
            ));
            // Newton from the cut edge
            let mut u = cx.mul(&sc.upm[i].1, &cx.from_f64(1.0 + 1e-9));
            for _ in 0..200 {
                let fu = cx.sub(&sc.delta(&u), &w);
                // Delta' in factored form
                let mut dp = cx.zero();
                for k in 0..=g {
                    let mut term = cx.from_i64(-1);
                    for l in 0..=g {
                        if l != k {
                            term = cx.mul(&term, &cx.sub(&sc.u[l], &u));
                        }
                    }
                    dp = cx.add(&dp, &term);
                }
                let step = cx.div(&fu, &dp);
                let next = cx.sub(&u, &step);
                if cx.abs(&step).to_f64() < 1e-40 * cx.abs(&u).to_f64().max(1e-300) {
                    return Ok(next);
                }
                u = next;
            }
            Ok(u)
        };
        let y_low = half_c + 0.2 * half_len;
        let y_high = half_c + 0.4 * half_len;
        for j in 1..=g {
            // In the edge coordinate Y (with |y| = e^{-Y/eps}) the scaled
            // integral becomes int G(u) (y^2 - c_{-1})/(y^2 + c_{-1}) dY
            // with a smooth bounded integrand.
            let integrand = |yy: f64| -> Result<Real> {
                let y_abs = cx.exp(&cx.div(&cx.from_f64(-yy), &eps_r));
                let u = solve_u(&y_abs)?;
                let probe = cx.mul(&sc.upm[i].1, &cx.from_f64(1.0 + 1e-12));
                let y = if sc.delta(&probe).is_positive() {
                    cx.neg(&y_abs)
                } else {
                    y_abs.clone()
                };
                // G = (1/(u-u_j) - 1/(u-u_0)) / sum_k 1/(u-u_k)
                let inv = |k: usize| cx.div(&cx.one(), &cx.sub(&u, &sc.u[k]));
                let gnum = cx.sub(&inv(j), &inv(0));
                let mut gden = cx.zero();
                for k in 0..=g {
                    gden = cx.add(&gden, &inv(k));
                }
                let gfac = cx.div(&gnum, &gden);
                let y2 = cx.mul(&y, &y);
                let frac = cx.div(&cx.sub(&y2, &sc.c[0]), &cx.add(&y2, &sc.c[0]));
                Ok(cx.mul(&gfac, &frac))
            };
            let n = 64;
            let mut acc = cx.zero();
            for k in 0..n {
                let t = (k as f64 + 0.5) / n as f64;
                acc = cx.add(&acc, &integrand(y_low + t * (y_high - y_low))?);
            }
            let computed = cx
                .mul(&acc, &cx.from_f64((y_high - y_low) / n as f64))
                .to_f64();
            // |Y_a - Y_b| = 0.2 * half_len by construction of the heights
            let target = if j == i || i == 0 { 0.2 * half_len } else { 0.0 };
            out.push(SegmentCheck {
                band: i,
                j,
                computed,
                target_magnitude: target,
            });
        }
    }
    Ok(out)
}

/// The nested-basis change: `T` is the unit anti-triangular matrix with
/// `T_ij = 1` when `i + j >= g + 1`; the nested cycles are
/// `Btilde_j = B_{g-j+1} + ... + B_g` and their pairing matrix is `TKT`.
pub struct BasisChangeT {
    pub t: Vec<Vec<i64>>,
    pub k_tilde: Mat,
}

pub fn basis_change(cd: &CurveData, graph: &MetricGraph) -> BasisChangeT {
    let g = cd.genus();
    let t: Vec<Vec<i64>> = (1..=g)
        .map(|i| (1..=g).map(|j| i64::from(i + j >= g + 1)).collect())
        .collect();
    let t_rat: Mat = t
        .iter()
        .map(|row| row.iter().map(|x| rat_i(*x)).collect())
        .collect();
    let k_tilde = mat_mul(&mat_mul(&t_rat, cd.k().mat()), &t_rat);

    // pairing of the nested cycles reproduces TKT exactly
    for i in 1..=g {
        for j in 1..=g {
            let mut acc = Rat::zero();
            for a in (g - i + 1)..=g {
                for b in (g - j + 1)..=g {
                    acc += graph.pairing(graph.cycle(a), graph.cycle(b));
                }
            }
            assert_eq!(acc, k_tilde[i - 1][j - 1], "nested pairing at ({i},{j})");
        }
    }
    BasisChangeT { t, k_tilde }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_graph, curve_data};
    use crate::rational::rat;

    fn inv_of(c: &[i64]) -> SpectralInvariants {
        SpectralInvariants::new(c.len() - 2, c.iter().map(|x| rat_i(*x)).collect()).unwrap()
    }

    #[test]
    fn roots_follow_tropical_predictions() {
        let inv = inv_of(&[6, 1, 0]);
        let sc = scaled_curve(&inv, &rat(1, 10), 50).unwrap();
        // X = (C_0 - C_1, C_1) = (1, 0)
        let cx = sc.ctx();
        let x0 = cx
            .mul(&cx.neg(&cx.ln(&sc.roots()[0]).unwrap()), &cx.from_rat(&rat(1, 10)))
            .to_f64();
        let x1 = cx
            .mul(&cx.neg(&cx.ln(&sc.roots()[1]).unwrap()), &cx.from_rat(&rat(1, 10)))
            .to_f64();
        assert!((x0 - 1.0).abs() < 0.05, "x0 = {x0}");
        assert!(x1.abs() < 0.05, "x1 = {x1}");
        assert!(root_limit_error(&sc).unwrap() < 0.05);
    }

    #[test]
    fn eps_too_large_fails_cleanly() {
        let inv = inv_of(&[6, 1, 0]);
        assert!(matches!(
            scaled_curve(&inv, &rat_i(5), 40),
            Err(Error::RootOrderingFailed(_))
        ));
    }

    #[test]
    fn omega_residue_is_one() {
        let inv = inv_of(&[6, 1, 0]);
        let sc = scaled_curve(&inv, &rat(1, 5), 50).unwrap();
        let r = omega0_residue(&sc, 1).unwrap();
        assert!((r.to_f64() - 1.0).abs() < 1e-30);
        assert!(omega0(&sc, 0).is_err());
    }

    #[test]
    fn a_periods_near_identity_g1() {
        let inv = inv_of(&[6, 1, 0]);
        let sc = scaled_curve(&inv, &rat(1, 20), 60).unwrap();
        let a = a_period_matrix(&sc).unwrap();
        assert!((a[0][0] - 1.0).abs() < 0.1, "A = {a:?}");
    }

    #[test]
    fn b_periods_near_k_g1() {
        let inv = inv_of(&[6, 1, 0]);
        let sc = scaled_curve(&inv, &rat(1, 20), 60).unwrap();
        let (p, _) = b_period_limits(&sc).unwrap();
        assert!((p[0][0] - 12.0).abs() < 1.2, "P = {p:?}");
    }

    #[test]
    fn basis_change_example() {
        let cd = curve_data(&inv_of(&[11, 5, 2, 0])).unwrap();
        let graph = build_graph(&cd).unwrap();
        let bc = basis_change(&cd, &graph);
        assert_eq!(bc.t, vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(bc.k_tilde[0], vec![rat_i(6), rat_i(3)]);
        assert_eq!(bc.k_tilde[1], vec![rat_i(3), rat_i(18)]);

        let cd1 = curve_data(&inv_of(&[6, 1, 0])).unwrap();
        let graph1 = build_graph(&cd1).unwrap();
        let bc1 = basis_change(&cd1, &graph1);
        assert_eq!(bc1.t, vec![vec![1]]);
        assert_eq!(bc1.k_tilde[0], vec![rat_i(12)]);
    }
}
