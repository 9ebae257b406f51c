//! Independent checks on the matrix method: the closed-form vanilla call,
//! a Monte Carlo pricer for the same discretely monitored contract, the
//! single-barrier embedding and the discrete/continuous barrier shift.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::operator::{MatrixPricer, PriceResult};
use crate::transform::OptionContract;

fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Black-Scholes European call.
pub fn bs_vanilla_call(spot: f64, strike: f64, rate: f64, vol: f64, expiry: f64) -> f64 {
    if strike <= 0.0 {
        return spot;
    }
    let sd = vol * expiry.sqrt();
    let d1 = ((spot / strike).ln() + (rate + 0.5 * vol * vol) * expiry) / sd;
    let d2 = d1 - sd;
    spot * norm_cdf(d1) - strike * (-rate * expiry).exp() * norm_cdf(d2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub paths: usize,
    pub seed: u64,
    pub antithetic: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { paths: 1_000_000, seed: 20_240_917, antithetic: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub price: f64,
    pub stderr: f64,
    pub paths: usize,
}

/// Samples per random stream; streams are keyed by chunk index so the
/// estimate does not depend on the thread count.
const CHUNK: usize = 4096;

/// Monte Carlo price of the discretely monitored double barrier call.
///
/// Log-prices are stepped exactly between monitoring dates. A path dies if
/// it is outside `[L, U]` at any of `t_1 .. t_{M-1}`; at expiry it pays
/// `S_T - E` only when `max(E, L) <= S_T <= U`.
pub fn mc_price(contract: &OptionContract, cfg: &McConfig) -> Result<McEstimate> {
    contract.validate()?;
    if cfg.paths == 0 {
        return Err(Error::InvalidParameter("Monte Carlo needs at least one path".into()));
    }
    let tau = contract.interval();
    let drift = (contract.rate - 0.5 * contract.vol * contract.vol) * tau;
    let step_sd = contract.vol * tau.sqrt();
    let lo = (contract.lower / contract.spot).ln();
    let hi = (contract.upper / contract.spot).ln();
    let floor = contract.strike.max(contract.lower);
    let dates = contract.dates;
    let normal = Normal::standard();

    let payoff = |zs: &[f64], sign: f64| -> f64 {
        let mut x = 0.0;
        for (m, z) in zs.iter().enumerate() {
            x += drift + step_sd * sign * z;
            if m + 1 < dates && (x < lo || x > hi) {
                return 0.0;
            }
        }
        if x > hi {
            return 0.0;
        }
        let st = contract.spot * x.exp();
        if st >= floor && st <= contract.upper {
            st - contract.strike
        } else {
            0.0
        }
    };

    // one sample = one path, or one antithetic pair averaged
    let samples = if cfg.antithetic { cfg.paths.div_ceil(2) } else { cfg.paths };
    let chunks = samples.div_ceil(CHUNK);
    let sums: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut zs = vec![0.0; dates];
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                for z in zs.iter_mut() {
                    let u = ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64);
                    *z = normal.inverse_cdf(u);
                }
                let v = if cfg.antithetic { 0.5 * (payoff(&zs, 1.0) + payoff(&zs, -1.0)) } else { payoff(&zs, 1.0) };
                s1 += v;
                s2 += v * v;
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = sums.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let n = samples as f64;
    let mean = s1 / n;
    let var = if samples > 1 { ((s2 - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    let disc = (-contract.rate * contract.expiry).exp();
    Ok(McEstimate {
        price: disc * mean,
        stderr: disc * (var / n).sqrt(),
        paths: if cfg.antithetic { 2 * samples } else { samples },
    })
}

/// Discretely monitored down-and-out call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DownAndOut {
    pub spot: f64,
    pub strike: f64,
    pub lower: f64,
    pub rate: f64,
    pub vol: f64,
    pub expiry: f64,
    pub dates: usize,
}

/// Upper barrier placed this many strikes away when embedding a single
/// barrier contract in the double barrier method.
pub const UPPER_BARRIER_MULTIPLE: f64 = 2.5;

impl DownAndOut {
    /// Double barrier contract with a remote upper barrier at
    /// `multiple * max(E, S0)`.
    pub fn embed(&self, multiple: f64) -> OptionContract {
        OptionContract {
            spot: self.spot,
            strike: self.strike,
            lower: self.lower,
            upper: multiple * self.strike.max(self.spot),
            rate: self.rate,
            vol: self.vol,
            expiry: self.expiry,
            dates: self.dates,
        }
    }
}

pub fn single_barrier_price(contract: &DownAndOut, pricer: &MatrixPricer) -> Result<PriceResult> {
    single_barrier_price_with(contract, UPPER_BARRIER_MULTIPLE, pricer)
}

pub fn single_barrier_price_with(contract: &DownAndOut, multiple: f64, pricer: &MatrixPricer) -> Result<PriceResult> {
    pricer.price(&contract.embed(multiple))
}

/// Rounded value of `-ζ(1/2) / √(2π)`.
pub const BARRIER_SHIFT: f64 = 0.5826;

/// Discrete-monitoring barrier equivalent to a continuously monitored
/// down barrier at `lower`: `L e^{0.5826 σ √Δt}`.
pub fn continuity_correction(lower: f64, vol: f64, dt: f64) -> Result<f64> {
    if !(lower > 0.0) || !(vol > 0.0) || !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "continuity correction needs L, sigma, dt > 0, got L={lower}, sigma={vol}, dt={dt}"
        )));
    }
    Ok(lower * (BARRIER_SHIFT * vol * dt.sqrt()).exp())
}

/// Continuously monitored down-and-out price estimated from the discrete
/// price at the shifted barrier.
pub fn continuous_down_out_price(contract: &DownAndOut, pricer: &MatrixPricer) -> Result<PriceResult> {
    let dt = contract.expiry / contract.dates as f64;
    let shifted = continuity_correction(contract.lower, contract.vol, dt)?;
    single_barrier_price(&DownAndOut { lower: shifted, ..*contract }, pricer)
}
