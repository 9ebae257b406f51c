//! Integration engines for the Gaussian-kernel integrals that fill the
//! transition matrix and the initial vector.
//!
//! Kernel times exponential has a closed form in `erf`. Kernel times a
//! Lagrange basis polynomial does not have a stable one at useful degrees,
//! so it goes through composite Gauss-Legendre panels clustered around the
//! kernel peak.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lagrange::NodeGrid;
use crate::transform::kernel_unchecked;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for k in 0..n.div_ceil(2) {
            let mut x = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[k] = -x;
            nodes[n - 1 - k] = x;
            weights[k] = w;
            weights[n - 1 - k] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let s: f64 = self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum();
        half * s
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// One Gauss-Legendre panel; builds the rule on each call.
pub fn gauss_legendre_panel<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, order: usize) -> f64 {
    GaussLegendre::new(order.max(2)).integrate(a, b, f)
}

/// `erf(v) - erf(u)` without cancellation in either tail.
pub fn erf_diff(u: f64, v: f64) -> f64 {
    if u >= 0.0 && v >= 0.0 {
        libm::erfc(u) - libm::erfc(v)
    } else if u <= 0.0 && v <= 0.0 {
        libm::erfc(-v) - libm::erfc(-u)
    } else {
        libm::erf(v) - libm::erf(u)
    }
}

/// `∫_lo^hi k(x - ξ, τ) e^{λ ξ} dξ` in closed form.
///
/// Completing the square gives
/// `e^{λx + λ²c²τ} · ½ [erf((hi - x - 2λc²τ)/(2c√τ)) - erf((lo - x - 2λc²τ)/(2c√τ))]`.
/// Infinite bounds are accepted.
pub fn gaussian_exp_moment(x: f64, lambda: f64, lo: f64, hi: f64, tau: f64, diffusion: f64) -> Result<f64> {
    if !(tau > 0.0) || !(diffusion > 0.0) {
        return Err(Error::Domain(format!("kernel moment needs tau > 0 and c^2 > 0, got tau={tau}, c^2={diffusion}")));
    }
    if !(lo <= hi) {
        return Err(Error::Domain(format!("moment bounds out of order: [{lo}, {hi}]")));
    }
    let ct = diffusion * tau;
    let shift = x + 2.0 * lambda * ct;
    let width = 2.0 * ct.sqrt();
    let mass = 0.5 * erf_diff((lo - shift) / width, (hi - shift) / width);
    if mass == 0.0 {
        return Ok(0.0);
    }
    Ok((lambda * x + lambda * lambda * ct).exp() * mass)
}

/// Panel layout for kernel-times-polynomial integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Gauss-Legendre points per panel.
    pub order: usize,
    /// Half-width of the finely paneled window, in units of `c√τ`.
    pub peak_window: f64,
    /// Fine panel width, in units of `c√τ`.
    pub fine_width: f64,
    /// Relative accuracy the layout is tuned for; checked in tests against a
    /// doubled-resolution layout, not enforced per call.
    pub target_rel_error: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { order: 40, peak_window: 8.0, fine_width: 1.0, target_rel_error: 1e-12 }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::InvalidParameter(format!("quadrature order must be >= 2, got {}", self.order)));
        }
        if !(self.peak_window > 0.0) || !(self.fine_width > 0.0) {
            return Err(Error::InvalidParameter("peak window and fine panel width must be positive".into()));
        }
        Ok(())
    }

    /// Same layout at twice the resolution in every direction.
    pub fn doubled(&self) -> Self {
        Self { order: 2 * self.order, fine_width: 0.5 * self.fine_width, peak_window: 1.5 * self.peak_window, ..*self }
    }
}

/// Fine panels shrink with the corridor so that a single panel never has to
/// resolve a high-degree basis polynomial over the whole of `[0, θ]`.
const MIN_PANELS_PER_CORRIDOR: f64 = 16.0;
/// Beyond this many kernel widths the kernel underflows; no panels needed.
const KERNEL_CUTOFF: f64 = 60.0;

/// Panels covering `[0, θ]` for a kernel centered at `center` with width
/// `scale = c√τ`: equal fine panels inside the peak window, then panels that
/// double in width moving away from it.
pub fn kernel_panels(center: f64, theta: f64, scale: f64, cfg: &QuadConfig) -> Vec<(f64, f64)> {
    let h = (cfg.fine_width * scale).min(theta / MIN_PANELS_PER_CORRIDOR);
    let w = cfg.peak_window * scale;
    let cutoff = KERNEL_CUTOFF * scale;
    let lo = (center - w).max(0.0);
    let hi = (center + w).min(theta);
    let mut panels = Vec::new();

    // left tail, built outward then reversed
    let mut left = Vec::new();
    let mut edge = lo;
    let mut width = 2.0 * h;
    while edge > 0.0 && center - edge < cutoff {
        let start = (edge - width).max(0.0);
        left.push((start, edge));
        edge = start;
        width *= 2.0;
    }
    left.reverse();
    panels.extend(left);

    if hi > lo {
        let count = ((hi - lo) / h).ceil().max(1.0) as usize;
        let step = (hi - lo) / count as f64;
        for k in 0..count {
            let a = lo + step * k as f64;
            let b = if k + 1 == count { hi } else { lo + step * (k + 1) as f64 };
            panels.push((a, b));
        }
    }

    let mut edge = hi;
    let mut width = 2.0 * h;
    while edge < theta && edge - center < cutoff {
        let end = (edge + width).min(theta);
        panels.push((edge, end));
        edge = end;
        width *= 2.0;
    }
    panels
}

/// Row `i` of the transition matrix:
/// `k_ij = ∫_0^θ k(x_i - ξ, τ) L_j(ξ) dξ` for every `j`.
///
/// All basis functions are evaluated together at each quadrature point, so
/// a row costs `O(points · n)` rather than `O(points · n²)`.
pub fn kernel_basis_row(
    grid: &NodeGrid,
    i: usize,
    tau: f64,
    diffusion: f64,
    cfg: &QuadConfig,
    rule: &GaussLegendre,
) -> Vec<f64> {
    let size = grid.len();
    let center = grid.nodes()[i];
    let ct = diffusion * tau;
    let mut row = vec![0.0; size];
    let mut basis = vec![0.0; size];
    for (a, b) in kernel_panels(center, grid.theta(), ct.sqrt(), cfg) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            let xi = mid + half * x;
            let kw = w * half * kernel_unchecked(center - xi, ct);
            if kw == 0.0 {
                continue;
            }
            grid.basis_all(xi, &mut basis);
            for (r, l) in row.iter_mut().zip(&basis) {
                *r += kw * l;
            }
        }
    }
    row
}

/// Single entry `k_ij`; same panels and summation as [`kernel_basis_row`].
pub fn kernel_basis_integral(grid: &NodeGrid, i: usize, j: usize, tau: f64, diffusion: f64, cfg: &QuadConfig) -> f64 {
    let rule = GaussLegendre::new(cfg.order);
    let center = grid.nodes()[i];
    let ct = diffusion * tau;
    let mut acc = 0.0;
    for (a, b) in kernel_panels(center, grid.theta(), ct.sqrt(), cfg) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            let xi = mid + half * x;
            let kw = w * half * kernel_unchecked(center - xi, ct);
            if kw == 0.0 {
                continue;
            }
            acc += kw * grid.basis_eval(j, xi);
        }
    }
    acc
}
