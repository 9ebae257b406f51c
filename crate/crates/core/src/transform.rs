//! Change of variables from the Black-Scholes pricing problem to a pure
//! heat equation on the log-barrier corridor.
//!
//! With `z = ln(S/L)` and time measured backwards from expiry, writing the
//! option value as `P = exp(alpha*z + beta*t) * g(z, t)` removes both the
//! first- and zeroth-order terms of the Black-Scholes operator and leaves
//! `g_t = c^2 g_zz` with `c^2 = sigma^2 / 2`. Between monitoring dates `g`
//! evolves by convolution with the heat kernel; at each date it is cut to
//! the corridor `[0, theta]`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Market and contract data for a discretely monitored double barrier
/// knock-out call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptionContract {
    pub spot: f64,
    pub strike: f64,
    pub lower: f64,
    pub upper: f64,
    pub rate: f64,
    pub vol: f64,
    pub expiry: f64,
    /// Number of equally spaced monitoring dates; the last one is expiry.
    pub dates: usize,
}

impl OptionContract {
    /// Checks every contract invariant, naming the first one that fails.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("spot", self.spot),
            ("strike", self.strike),
            ("lower", self.lower),
            ("upper", self.upper),
            ("rate", self.rate),
            ("vol", self.vol),
            ("expiry", self.expiry),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::InvalidContract(format!("{name} must be finite, got {v}")));
            }
        }
        if self.lower <= 0.0 {
            return Err(Error::InvalidContract(format!("lower barrier must be positive, got {}", self.lower)));
        }
        if self.lower >= self.upper {
            return Err(Error::InvalidContract(format!(
                "lower barrier {} must be below upper barrier {}",
                self.lower, self.upper
            )));
        }
        if self.spot < self.lower || self.spot > self.upper {
            return Err(Error::SpotOutsideCorridor { spot: self.spot, lower: self.lower, upper: self.upper });
        }
        if self.strike < 0.0 {
            return Err(Error::InvalidContract(format!("strike must be non-negative, got {}", self.strike)));
        }
        if self.vol <= 0.0 {
            return Err(Error::InvalidContract(format!("vol must be positive, got {}", self.vol)));
        }
        if self.expiry <= 0.0 {
            return Err(Error::InvalidContract(format!("expiry must be positive, got {}", self.expiry)));
        }
        if self.dates == 0 {
            return Err(Error::InvalidContract("at least one monitoring date is required".into()));
        }
        Ok(())
    }

    /// Spacing between monitoring dates.
    pub fn interval(&self) -> f64 {
        self.expiry / self.dates as f64
    }

    pub fn with_spot(&self, spot: f64) -> Self {
        Self { spot, ..*self }
    }
}

/// The contract restated in heat-equation coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatProblem {
    /// Corridor width `ln(U/L)`.
    pub theta: f64,
    /// `ln(E/L)`; may be negative when the strike is below the lower barrier.
    pub log_strike: f64,
    /// Lower end of the payoff support, `max(log_strike, 0)`.
    pub delta: f64,
    /// Log-price drift `r - sigma^2/2`.
    pub drift: f64,
    /// Space exponent of the transform.
    pub alpha: f64,
    /// Time exponent of the transform.
    pub beta: f64,
    /// Diffusion constant `c^2`.
    pub diffusion: f64,
    /// Monitoring interval `T/M`.
    pub tau: f64,
    /// Log-spot `ln(S0/L)`.
    pub z0: f64,
    /// Lower barrier, kept for the payoff prefactor.
    pub lower: f64,
}

impl HeatProblem {
    /// `c * sqrt(tau)`, the natural length scale of one convolution step.
    pub fn kernel_scale(&self) -> f64 {
        (self.diffusion * self.tau).sqrt()
    }

    /// True when the strike sits at or above the upper barrier so the
    /// payoff corridor is empty.
    pub fn payoff_empty(&self) -> bool {
        self.delta >= self.theta
    }
}

pub fn to_heat(contract: &OptionContract) -> Result<HeatProblem> {
    contract.validate()?;
    let OptionContract { spot, strike, lower, upper, rate, vol, expiry, dates } = *contract;
    let var = vol * vol;
    let drift = rate - 0.5 * var;
    let theta = (upper / lower).ln();
    // ln(0) = -inf keeps delta = 0 for a zero strike.
    let log_strike = (strike / lower).ln();
    let delta = log_strike.max(0.0);
    // z0 is clamped against rounding in ln when the spot sits on a barrier.
    let z0 = (spot / lower).ln().clamp(0.0, theta);
    Ok(HeatProblem {
        theta,
        log_strike,
        delta,
        drift,
        alpha: -drift / var,
        beta: -(rate + drift * drift / (2.0 * var)),
        diffusion: 0.5 * var,
        tau: expiry / dates as f64,
        z0,
        lower,
    })
}

/// Transformed payoff `L e^{-alpha z} (e^z - e^{E*})` on `[delta, theta]`.
pub fn payoff_g0(z: f64, hp: &HeatProblem) -> f64 {
    if z < hp.delta || z > hp.theta {
        return 0.0;
    }
    hp.lower * (-hp.alpha * z).exp() * (z.exp() - hp.log_strike.exp())
}

/// Heat kernel `(4 pi c^2 t)^{-1/2} exp(-z^2 / (4 c^2 t))`.
pub fn heat_kernel(z: f64, t: f64, diffusion: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("heat kernel needs t > 0, got {t}")));
    }
    if !(diffusion > 0.0) {
        return Err(Error::Domain(format!("heat kernel needs c^2 > 0, got {diffusion}")));
    }
    Ok(kernel_unchecked(z, t * diffusion))
}

/// Kernel with the product `c^2 t` precomputed; callers guarantee positivity.
#[inline]
pub(crate) fn kernel_unchecked(z: f64, ct: f64) -> f64 {
    (-z * z / (4.0 * ct)).exp() / (4.0 * PI * ct).sqrt()
}

/// Undo the transform: `exp(alpha z0 + beta T) * g(z0)`.
pub fn assemble_price(g_at_z0: f64, hp: &HeatProblem, expiry: f64) -> f64 {
    (hp.alpha * hp.z0 + hp.beta * expiry).exp() * g_at_z0
}
