//! Barycentric Lagrange interpolation on Jacobi roots mapped onto the
//! log-corridor `[0, θ]`.

use crate::error::{Error, Result};
use crate::jacobi::{jacobi_roots, JacobiParams};

/// Interpolation nodes and barycentric weights.
///
/// Immutable once built; holds `degree + 1` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeGrid {
    params: JacobiParams,
    degree: usize,
    theta: f64,
    standard: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl NodeGrid {
    /// Roots of `P_{degree+1}^{(a,b)}` shifted to `[0, θ]`.
    pub fn new(params: JacobiParams, degree: usize, theta: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!("corridor width must be positive, got {theta}")));
        }
        let standard = jacobi_roots(params, degree + 1)?;
        let nodes = standard.iter().map(|x| 0.5 * theta * (x + 1.0)).collect();
        let weights = barycentric_weights(&standard);
        Ok(Self { params, degree, theta, standard, nodes, weights })
    }

    /// Convenience: grid with `count` interpolation points.
    pub fn with_nodes(params: JacobiParams, count: usize, theta: f64) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParameter("node count must be at least 1".into()));
        }
        Self::new(params, count - 1, theta)
    }

    pub fn params(&self) -> JacobiParams {
        self.params
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Roots on `[-1, 1]`.
    pub fn standard_nodes(&self) -> &[f64] {
        &self.standard
    }

    /// Roots on `[0, θ]`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn node_index(&self, x: f64) -> Option<usize> {
        self.nodes.iter().position(|&n| n == x)
    }

    /// `L_i(x)`.
    pub fn basis_eval(&self, i: usize, x: f64) -> f64 {
        if let Some(k) = self.node_index(x) {
            return if k == i { 1.0 } else { 0.0 };
        }
        let denom: f64 = self.nodes.iter().zip(&self.weights).map(|(n, w)| w / (x - n)).sum();
        self.weights[i] / (x - self.nodes[i]) / denom
    }

    /// Every `L_i(x)` at once, written into `out`.
    pub fn basis_all(&self, x: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.len());
        if let Some(k) = self.node_index(x) {
            out.iter_mut().for_each(|v| *v = 0.0);
            out[k] = 1.0;
            return;
        }
        let mut denom = 0.0;
        for ((o, n), w) in out.iter_mut().zip(&self.nodes).zip(&self.weights) {
            *o = w / (x - n);
            denom += *o;
        }
        out.iter_mut().for_each(|v| *v /= denom);
    }

    /// `Σ values_i L_i(x)` in the barycentric second form.
    pub fn interpolate(&self, values: &[f64], x: f64) -> Result<f64> {
        if values.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), actual: values.len() });
        }
        if let Some(k) = self.node_index(x) {
            return Ok(values[k]);
        }
        let (mut num, mut den) = (0.0, 0.0);
        for ((n, w), v) in self.nodes.iter().zip(&self.weights).zip(values) {
            let t = w / (x - n);
            num += t * v;
            den += t;
        }
        Ok(num / den)
    }

    /// `max_x Σ |L_i(x)|` over `samples` equispaced points of `[0, θ]`.
    pub fn lebesgue_estimate(&self, samples: usize) -> f64 {
        let mut basis = vec![0.0; self.len()];
        (0..samples.max(2))
            .map(|k| {
                let x = self.theta * k as f64 / (samples.max(2) - 1) as f64;
                self.basis_all(x, &mut basis);
                basis.iter().map(|v| v.abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// `w_i ∝ 1 / Π_{j≠i} (x_i - x_j)`, accumulated in log space and normalized
/// to unit maximum so large grids neither overflow nor underflow.
fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let logs: Vec<(f64, f64)> = nodes
        .iter()
        .enumerate()
        .map(|(i, xi)| {
            let mut log = 0.0;
            let mut sign = 1.0;
            for (j, xj) in nodes.iter().enumerate() {
                if i != j {
                    let d = xi - xj;
                    log -= d.abs().ln();
                    if d < 0.0 {
                        sign = -sign;
                    }
                }
            }
            (sign, log)
        })
        .collect();
    let top = logs.iter().map(|(_, l)| *l).fold(f64::NEG_INFINITY, f64::max);
    logs.into_iter().map(|(s, l)| s * (l - top).exp()).collect()
}
