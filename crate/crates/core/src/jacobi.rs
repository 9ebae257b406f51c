//! Jacobi polynomials `P_k^{(a,b)}` on `[-1, 1]`: evaluation through the
//! three-term recurrence, roots, and weighted inner products.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;

/// Weight exponents of `(1-x)^a (1+x)^b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiParams {
    pub a: f64,
    pub b: f64,
}

impl JacobiParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > -1.0) || !(b > -1.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("Jacobi exponents must be finite and > -1, got a={a}, b={b}")));
        }
        Ok(Self { a, b })
    }

    /// First-kind Chebyshev weight, `a = b = -1/2`.
    pub const CHEBYSHEV: JacobiParams = JacobiParams { a: -0.5, b: -0.5 };
    pub const LEGENDRE: JacobiParams = JacobiParams { a: 0.0, b: 0.0 };
}

impl Default for JacobiParams {
    fn default() -> Self {
        Self::CHEBYSHEV
    }
}

/// Coefficients of `P_{i+1} = (a_i x - b_i) P_i - c_i P_{i-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Recurrence coefficients for step `i -> i+1`, valid for `i >= 1`.
pub fn recurrence_coeffs(p: JacobiParams, i: usize) -> Result<RecurrenceCoeffs> {
    if i == 0 {
        return Err(Error::InvalidParameter("recurrence starts at i = 1; P_1 is seeded directly".into()));
    }
    let (a, b) = (p.a, p.b);
    let k = i as f64;
    let s = 2.0 * k + a + b;
    // s > 0 and k + a + b + 1 > 0 for every i >= 1 once a, b > -1.
    debug_assert!(s > 0.0 && k + a + b + 1.0 > 0.0);
    let denom = 2.0 * (k + 1.0) * (k + a + b + 1.0);
    Ok(RecurrenceCoeffs {
        a: (s + 1.0) * (s + 2.0) / denom,
        b: (b * b - a * a) * (s + 1.0) / (denom * s),
        c: 2.0 * (k + a) * (k + b) * (s + 2.0) / (denom * s),
    })
}

/// Value of `P_degree^{(a,b)}(x)`.
pub fn eval_jacobi(p: JacobiParams, degree: usize, x: f64) -> f64 {
    eval_with_derivative(p, degree, x).0
}

/// Value and first derivative, both carried through the same recurrence.
pub fn eval_with_derivative(p: JacobiParams, degree: usize, x: f64) -> (f64, f64) {
    let p0 = 1.0;
    if degree == 0 {
        return (p0, 0.0);
    }
    let slope = 0.5 * (p.a + p.b + 2.0);
    let mut prev = (p0, 0.0);
    let mut cur = (slope * x + 0.5 * (p.a - p.b), slope);
    for i in 1..degree {
        let RecurrenceCoeffs { a, b, c } = recurrence_coeffs(p, i).expect("i >= 1 inside the recurrence loop");
        let lin = a * x - b;
        let next = (lin * cur.0 - c * prev.0, a * cur.0 + lin * cur.1 - c * prev.1);
        prev = cur;
        cur = next;
    }
    cur
}

/// Squared weighted norm `lambda_k = ||P_k||^2`.
pub fn norm_squared(p: JacobiParams, k: usize) -> f64 {
    let (a, b) = (p.a, p.b);
    let kf = k as f64;
    let log = if k == 0 {
        (a + b + 1.0) * 2f64.ln() + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)
    } else {
        (a + b + 1.0) * 2f64.ln() - (2.0 * kf + a + b + 1.0).ln() + ln_gamma(kf + a + 1.0) + ln_gamma(kf + b + 1.0)
            - ln_gamma(kf + a + b + 1.0)
            - ln_gamma(kf + 1.0)
    };
    log.exp()
}

const NEWTON_BUDGET: usize = 100;

/// The `count` roots of `P_count^{(a,b)}`, ascending, all inside `(-1, 1)`.
///
/// Newton iteration with deflation against already-found roots, started from
/// the asymptotic angle `(k + (2a+3)/4) pi / (N + (a+b+1)/2)`. If that fails
/// to produce `count` distinct roots, a sign-change scan with bisection takes
/// over.
pub fn jacobi_roots(p: JacobiParams, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidParameter("root count must be at least 1".into()));
    }
    if count == 1 {
        return Ok(vec![(p.b - p.a) / (p.a + p.b + 2.0)]);
    }
    let roots = match newton_deflated(p, count) {
        Some(r) if roots_valid(&r, count) => r,
        _ => bracketed(p, count)?,
    };
    check_residuals(p, count, &roots)?;
    Ok(roots)
}

fn newton_deflated(p: JacobiParams, count: usize) -> Option<Vec<f64>> {
    let n = count as f64;
    let mut found: Vec<f64> = Vec::with_capacity(count);
    for k in 0..count {
        let angle = (k as f64 + 0.25 * (2.0 * p.a + 3.0)) * PI / (n + 0.5 * (p.a + p.b + 1.0));
        let mut x = angle.cos();
        let mut converged = false;
        for _ in 0..NEWTON_BUDGET {
            let (v, d) = eval_with_derivative(p, count, x);
            let deflate: f64 = found.iter().map(|r| 1.0 / (x - r)).sum();
            let step = v / (d - v * deflate);
            if !step.is_finite() {
                break;
            }
            x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-3) {
                converged = true;
                break;
            }
        }
        if !converged || !(x > -1.0 && x < 1.0) {
            return None;
        }
        found.push(x);
    }
    found.sort_by(|a, b| a.total_cmp(b));
    Some(found)
}

fn roots_valid(roots: &[f64], count: usize) -> bool {
    roots.len() == count && roots.iter().all(|x| *x > -1.0 && *x < 1.0) && roots.windows(2).all(|w| w[0] < w[1])
}

fn bracketed(p: JacobiParams, count: usize) -> Result<Vec<f64>> {
    let samples = 64 * count + 64;
    let grid: Vec<f64> = (0..=samples).map(|k| -(PI * k as f64 / samples as f64).cos()).collect();
    let mut roots = Vec::with_capacity(count);
    let mut lo = grid[0];
    let mut flo = eval_jacobi(p, count, lo);
    for &hi in &grid[1..] {
        let fhi = eval_jacobi(p, count, hi);
        if flo == 0.0 {
            roots.push(lo);
        } else if flo.signum() != fhi.signum() && fhi != 0.0 {
            roots.push(bisect(p, count, lo, hi, flo));
        }
        lo = hi;
        flo = fhi;
    }
    roots.retain(|x| *x > -1.0 && *x < 1.0);
    if !roots_valid(&roots, count) {
        return Err(Error::RootConvergence {
            degree: count,
            reason: format!("sign-change scan found {} of {count} roots", roots.len()),
        });
    }
    Ok(roots)
}

fn bisect(p: JacobiParams, degree: usize, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = eval_jacobi(p, degree, mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Estimate of `max |P_degree|` on `[-1, 1]` from endpoints plus a dense
/// Chebyshev-spaced sample.
pub fn sup_norm_estimate(p: JacobiParams, degree: usize) -> f64 {
    let samples = 32 * degree + 32;
    (0..=samples).map(|k| eval_jacobi(p, degree, (PI * k as f64 / samples as f64).cos()).abs()).fold(0.0, f64::max)
}

fn check_residuals(p: JacobiParams, count: usize, roots: &[f64]) -> Result<()> {
    let tol = 1e-12 * sup_norm_estimate(p, count);
    for &x in roots {
        let (v, d) = eval_with_derivative(p, count, x);
        // near the endpoints |P'| is large enough that a root correct to
        // the last few ulps can still exceed the relative bound
        let ulp_bound = 8.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) * d.abs();
        if v.abs() > tol.max(ulp_bound) {
            return Err(Error::RootConvergence {
                degree: count,
                reason: format!("residual {:e} at x={x} exceeds {tol:e}", v.abs()),
            });
        }
    }
    Ok(())
}

/// `∫_{-1}^{1} f(x) (1-x)^a (1+x)^b dx`.
///
/// Each half of the interval is integrated in the distance-to-endpoint
/// variable on panels graded geometrically toward the endpoint, so a weak
/// endpoint singularity (`a` or `b` below zero) costs only a logarithmic
/// number of panels. The final sliver is integrated analytically with `f`
/// frozen at the endpoint.
pub fn weighted_integral<F: Fn(f64) -> f64>(p: JacobiParams, f: F, order: usize) -> f64 {
    let rule = GaussLegendre::new(order.max(2));
    // right half: t = 1 - x in [0, 1], weight t^a (2 - t)^b
    let right = graded_half(&rule, p.a, |t| f(1.0 - t) * (2.0 - t).powf(p.b), f(1.0) * 2f64.powf(p.b));
    // left half: s = 1 + x in [0, 1], weight s^b (2 - s)^a
    let left = graded_half(&rule, p.b, |s| f(s - 1.0) * (2.0 - s).powf(p.a), f(-1.0) * 2f64.powf(p.a));
    right + left
}

fn graded_half<G: Fn(f64) -> f64>(rule: &GaussLegendre, expo: f64, smooth: G, at_zero: f64) -> f64 {
    const RATIO: f64 = 0.15;
    let levels = ((20.0 * 10f64.ln()) / ((expo + 1.0) * (1.0 / RATIO).ln())).ceil() as usize;
    let levels = levels.clamp(1, 2000);
    let mut hi = 1.0;
    let mut acc = 0.0;
    for _ in 0..levels {
        let lo = hi * RATIO;
        acc += rule.integrate(lo, hi, |t| smooth(t) * t.powf(expo));
        hi = lo;
    }
    acc + at_zero * hi.powf(expo + 1.0) / (expo + 1.0)
}

/// Weighted inner product `<P_i, P_j>` under `(1-x)^a (1+x)^b`.
pub fn orthogonality_residual(p: JacobiParams, i: usize, j: usize, order: usize) -> f64 {
    let order = order.max((i + j) / 2 + 1);
    weighted_integral(p, |x| eval_jacobi(p, i, x) * eval_jacobi(p, j, x), order)
}
