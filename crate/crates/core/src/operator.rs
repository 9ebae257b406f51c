//! The operational matrix: projecting the truncated heat-kernel convolution
//! onto the interpolation space turns `M` monitoring steps into `M - 1`
//! matrix-vector products.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::jacobi::JacobiParams;
use crate::lagrange::NodeGrid;
use crate::quad::{gaussian_exp_moment, kernel_basis_row, GaussLegendre, QuadConfig};
use crate::transform::{assemble_price, to_heat, HeatProblem, OptionContract};

/// Dense `(n+1) x (n+1)` matrix with `k_ij = ∫_0^θ k(x_i - ξ, τ) L_j(ξ) dξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    size: usize,
    entries: Vec<f64>,
    pub tau: f64,
    pub diffusion: f64,
}

impl TransitionMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>, tau: f64, diffusion: f64) -> Result<Self> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for r in rows {
            if r.len() != size {
                return Err(Error::DimensionMismatch { expected: size, actual: r.len() });
            }
            entries.extend(r);
        }
        Ok(Self { size, entries, tau, diffusion })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.size {
            return Err(Error::DimensionMismatch { expected: self.size, actual: v.len() });
        }
        Ok(self.entries.chunks_exact(self.size).map(|r| dot(r, v)).collect())
    }

    /// Largest eigenvalue magnitude estimate by power iteration.
    pub fn spectral_radius_estimate(&self, iterations: usize) -> f64 {
        let mut v = vec![1.0; self.size];
        let mut est = 0.0;
        for _ in 0..iterations {
            let w = self.apply(&v).expect("square");
            let norm = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if norm == 0.0 {
                return 0.0;
            }
            est = norm / v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            v = w.into_iter().map(|x| x / norm).collect();
        }
        est
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Node values of the first convolved payoff, `a_{1i} = (K g_0)(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialVector {
    pub values: Vec<f64>,
}

pub fn build_matrix(grid: &NodeGrid, hp: &HeatProblem, cfg: &QuadConfig) -> Result<TransitionMatrix> {
    cfg.validate()?;
    if !(hp.tau > 0.0) {
        return Err(Error::Domain(format!("monitoring interval must be positive, got {}", hp.tau)));
    }
    let rule = GaussLegendre::new(cfg.order);
    let rows: Vec<Vec<f64>> =
        (0..grid.len()).into_par_iter().map(|i| kernel_basis_row(grid, i, hp.tau, hp.diffusion, cfg, &rule)).collect();
    TransitionMatrix::from_rows(rows, hp.tau, hp.diffusion)
}

/// `a_{1i} = L·M(x_i, 1-α) - L e^{E*}·M(x_i, -α)` with `M` the closed-form
/// kernel moment over `[δ, θ]`.
pub fn build_initial_vector(grid: &NodeGrid, hp: &HeatProblem) -> Result<InitialVector> {
    if hp.payoff_empty() {
        return Ok(InitialVector { values: vec![0.0; grid.len()] });
    }
    let strike_factor = hp.log_strike.exp();
    let values = grid
        .nodes()
        .iter()
        .map(|&x| {
            let up = gaussian_exp_moment(x, 1.0 - hp.alpha, hp.delta, hp.theta, hp.tau, hp.diffusion)?;
            let down = gaussian_exp_moment(x, -hp.alpha, hp.delta, hp.theta, hp.tau, hp.diffusion)?;
            // the integrand is non-negative; only round-off near the kink can dip below zero
            Ok((hp.lower * (up - strike_factor * down)).max(0.0))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(InitialVector { values })
}

/// `K^{M-1} G_1` by repeated matrix-vector products.
pub fn propagate(k: &TransitionMatrix, g1: &InitialVector, dates: usize) -> Result<Vec<f64>> {
    if dates == 0 {
        return Err(Error::InvalidParameter("at least one monitoring date is required".into()));
    }
    if g1.values.len() != k.size() {
        return Err(Error::DimensionMismatch { expected: k.size(), actual: g1.values.len() });
    }
    let mut v = g1.values.clone();
    for _ in 1..dates {
        v = k.apply(&v)?;
    }
    Ok(v)
}

/// Settings of the matrix method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixPricer {
    /// Number of interpolation points (polynomial degree + 1).
    pub nodes: usize,
    pub jacobi: JacobiParams,
    pub quad: QuadConfig,
}

impl Default for MatrixPricer {
    fn default() -> Self {
        Self { nodes: 25, jacobi: JacobiParams::CHEBYSHEV, quad: QuadConfig::default() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub build_matrix: f64,
    pub build_vector: f64,
    pub propagate: f64,
    pub evaluate: f64,
}

impl PhaseTimings {
    pub fn total(&self) -> f64 {
        self.build_matrix + self.build_vector + self.propagate + self.evaluate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceResult {
    pub price: f64,
    pub spot: f64,
    pub nodes: usize,
    pub dates: usize,
    pub jacobi: JacobiParams,
    pub upper: f64,
    pub z0: f64,
    pub theta: f64,
    pub timings: PhaseTimings,
}

/// Propagated node values for one contract template; everything except the
/// final interpolation is independent of the spot.
#[derive(Debug, Clone)]
pub struct PropagatedSolution {
    pub contract: OptionContract,
    pub heat: HeatProblem,
    pub grid: NodeGrid,
    pub coefficients: Vec<f64>,
    pub timings: PhaseTimings,
}

impl PropagatedSolution {
    pub fn price_at(&self, spot: f64, pricer: &MatrixPricer) -> Result<PriceResult> {
        let contract = self.contract.with_spot(spot);
        let hp = to_heat(&contract)?;
        let start = Instant::now();
        let g = self.grid.interpolate(&self.coefficients, hp.z0)?;
        // an empty payoff corridor is worth exactly zero, not a signed zero
        let price = if hp.payoff_empty() { 0.0 } else { assemble_price(g, &hp, contract.expiry) };
        let mut timings = self.timings;
        timings.evaluate = start.elapsed().as_secs_f64();
        Ok(PriceResult {
            price,
            spot,
            nodes: pricer.nodes,
            dates: contract.dates,
            jacobi: pricer.jacobi,
            upper: contract.upper,
            z0: hp.z0,
            theta: hp.theta,
            timings,
        })
    }
}

impl MatrixPricer {
    pub fn new(nodes: usize, jacobi: JacobiParams) -> Self {
        Self { nodes, jacobi, ..Self::default() }
    }

    pub fn solve(&self, contract: &OptionContract) -> Result<PropagatedSolution> {
        if self.nodes == 0 {
            return Err(Error::InvalidParameter("node count must be at least 1".into()));
        }
        let heat = to_heat(contract)?;
        let grid = NodeGrid::with_nodes(self.jacobi, self.nodes, heat.theta)?;
        let mut timings = PhaseTimings::default();

        let t = Instant::now();
        let k = build_matrix(&grid, &heat, &self.quad)?;
        timings.build_matrix = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let g1 = build_initial_vector(&grid, &heat)?;
        timings.build_vector = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let coefficients = propagate(&k, &g1, contract.dates)?;
        timings.propagate = t.elapsed().as_secs_f64();

        Ok(PropagatedSolution { contract: *contract, heat, grid, coefficients, timings })
    }

    pub fn price(&self, contract: &OptionContract) -> Result<PriceResult> {
        self.solve(contract)?.price_at(contract.spot, self)
    }

    /// Prices at several spots from one matrix build.
    pub fn price_curve(&self, template: &OptionContract, spots: &[f64]) -> Result<Vec<PriceResult>> {
        for &s in spots {
            if !(s >= template.lower && s <= template.upper) {
                return Err(Error::SpotOutsideCorridor { spot: s, lower: template.lower, upper: template.upper });
            }
        }
        let solution = self.solve(template)?;
        spots.iter().map(|&s| solution.price_at(s, self)).collect()
    }
}

/// Price with `nodes` interpolation points; see [`MatrixPricer`].
pub fn price(contract: &OptionContract, nodes: usize, jacobi: JacobiParams, cfg: &QuadConfig) -> Result<PriceResult> {
    MatrixPricer { nodes, jacobi, quad: *cfg }.price(contract)
}

/// `count` equally spaced spots spanning `[L, U]`.
pub fn spot_grid(contract: &OptionContract, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![contract.spot],
        _ => (0..count)
            .map(|k| {
                if k + 1 == count {
                    contract.upper
                } else {
                    contract.lower + (contract.upper - contract.lower) * k as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// What [`max_error_study`] measures against.
#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    /// The matrix method itself at another resolution.
    Pricer(MatrixPricer),
    /// Known prices, one per spot.
    Values(Vec<f64>),
}

impl Default for Reference {
    fn default() -> Self {
        Reference::Pricer(MatrixPricer::new(100, JacobiParams::CHEBYSHEV))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorStudy {
    pub max_abs_error: f64,
    pub worst_spot: f64,
    pub errors: Vec<f64>,
}

/// `max_s |price_n(s) - reference(s)|` over `spots`.
pub fn max_error_study(
    contract: &OptionContract,
    pricer: &MatrixPricer,
    spots: &[f64],
    reference: &Reference,
) -> Result<ErrorStudy> {
    let computed = pricer.price_curve(contract, spots)?;
    let reference_prices: Vec<f64> = match reference {
        Reference::Pricer(p) => p.price_curve(contract, spots)?.into_iter().map(|r| r.price).collect(),
        Reference::Values(v) => {
            if v.len() != spots.len() {
                return Err(Error::DimensionMismatch { expected: spots.len(), actual: v.len() });
            }
            v.clone()
        }
    };
    let errors: Vec<f64> = computed.iter().zip(&reference_prices).map(|(c, r)| (c.price - r).abs()).collect();
    let (worst, max) =
        errors.iter().enumerate().fold((0, 0.0f64), |(bi, bv), (i, &e)| if e > bv { (i, e) } else { (bi, bv) });
    Ok(ErrorStudy { max_abs_error: max, worst_spot: spots.get(worst).copied().unwrap_or(f64::NAN), errors })
}
