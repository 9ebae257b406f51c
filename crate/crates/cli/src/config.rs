//! Command-line flags and the flat JSON config file they override.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use jacobi_barrier::{JacobiParams, MatrixPricer, McConfig, OptionContract};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Parser)]
#[command(name = "jbarrier", version, about = "Discretely monitored barrier option pricing")]
pub struct Cli {
    #[command(flatten)]
    pub settings: Settings,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Price one contract.
    Price,
    /// Prices at several spots from one matrix build.
    Curve {
        /// Comma-separated spots; defaults to an even grid over [lower, upper].
        #[arg(long, value_delimiter = ',')]
        spots: Vec<f64>,
        /// Grid size when --spots is not given.
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Recompute a published case set (1-5) against its targets.
    Table { id: u32 },
    /// Max error over a spot grid as the node count grows.
    Converge {
        #[arg(long, default_value_t = 5)]
        min_nodes: usize,
        #[arg(long, default_value_t = 40)]
        max_nodes: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
        /// `self:<nodes>` for the method at a higher node count, or a known
        /// price at the contract spot.
        #[arg(long, default_value = "self:100")]
        reference: String,
        /// Spot grid size for a `self:` reference.
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Wall time of a full price against the number of monitoring dates.
    Timing {
        #[arg(long, value_delimiter = ',', default_values_t = [5, 25, 125])]
        dates_list: Vec<usize>,
        /// Repetitions per date count; the median is reported.
        #[arg(long, default_value_t = 5)]
        runs: usize,
    },
    /// Monte Carlo estimate of the same contract.
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Matrix,
    Mc,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Human,
    Csv,
    Json,
}

/// Every setting shared by the subcommands. Unset fields fall back to the
/// config file, then to the built-in defaults.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[arg(long, global = true)]
    pub spot: Option<f64>,
    #[arg(long, global = true)]
    pub strike: Option<f64>,
    #[arg(long, global = true)]
    pub lower: Option<f64>,
    #[arg(long, global = true)]
    pub upper: Option<f64>,
    #[arg(long, global = true)]
    pub rate: Option<f64>,
    #[arg(long, global = true)]
    pub vol: Option<f64>,
    #[arg(long, global = true)]
    pub expiry: Option<f64>,
    /// Number of monitoring dates, the last one at expiry.
    #[arg(long, global = true)]
    pub dates: Option<usize>,
    /// Interpolation points (polynomial degree + 1).
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    /// Jacobi parameter on the (1 - x) factor.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Jacobi parameter on the (1 + x) factor.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub method: Option<Method>,
    #[arg(long, global = true)]
    pub paths: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub antithetic: Option<bool>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! overlay {
    ($top:expr, $base:expr, $($f:ident),*) => {
        Settings { $($f: $top.$f.or($base.$f),)* config: $top.config.clone() }
    };
}

impl Settings {
    /// Flags on top of the config file named by `--config`, if any.
    pub fn resolve(self) -> Result<Settings, Failure> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let base = load_config(&path)?;
        Ok(overlay!(
            self, base, spot, strike, lower, upper, rate, vol, expiry, dates, nodes, a, b, method, paths, seed,
            antithetic, format, out
        ))
    }

    /// The contract, defaulting to S0 = E = 100, [95, 120], r = 5%,
    /// sigma = 25%, T = 0.5 and 5 dates.
    pub fn contract(&self) -> OptionContract {
        OptionContract {
            spot: self.spot.unwrap_or(100.0),
            strike: self.strike.unwrap_or(100.0),
            lower: self.lower.unwrap_or(95.0),
            upper: self.upper.unwrap_or(120.0),
            rate: self.rate.unwrap_or(0.05),
            vol: self.vol.unwrap_or(0.25),
            expiry: self.expiry.unwrap_or(0.5),
            dates: self.dates.unwrap_or(5),
        }
    }

    pub fn pricer(&self) -> Result<MatrixPricer, Failure> {
        let nodes = self.nodes.unwrap_or(25);
        if nodes == 0 {
            return Err(Failure::Validation("--nodes must be at least 1".into()));
        }
        let jacobi = JacobiParams::new(self.a.unwrap_or(-0.5), self.b.unwrap_or(-0.5))?;
        Ok(MatrixPricer::new(nodes, jacobi))
    }

    pub fn mc(&self) -> Result<McConfig, Failure> {
        let d = McConfig::default();
        let cfg = McConfig {
            paths: self.paths.unwrap_or(d.paths),
            seed: self.seed.unwrap_or(d.seed),
            antithetic: self.antithetic.unwrap_or(d.antithetic),
        };
        if cfg.paths == 0 {
            return Err(Failure::Validation("--paths must be at least 1".into()));
        }
        Ok(cfg)
    }

    pub fn method(&self) -> Method {
        self.method.unwrap_or(Method::Matrix)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Human)
    }
}

fn load_config(path: &Path) -> Result<Settings, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("config {}: {e}", path.display())))
}
