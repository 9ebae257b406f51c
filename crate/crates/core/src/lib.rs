//! Prices discretely monitored single and double barrier knock-out calls
//! under Black-Scholes.
//!
//! The contract is mapped to a heat equation on the log-corridor
//! ([`transform`]). Between monitoring dates the solution is a truncated
//! heat-kernel convolution; projecting it onto polynomials interpolating at
//! Jacobi roots ([`jacobi`], [`lagrange`]) turns the convolution into a
//! fixed matrix ([`operator`]) whose entries come from [`quad`]. Monitoring
//! `M` times is then `M - 1` matrix-vector products.
//!
//! [`oracles`] holds independent checks and [`tables`] the published case
//! sets used for regression.

// `!(x > 0.0)` is used on purpose so NaN fails positivity checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod jacobi;
pub mod lagrange;
pub mod operator;
pub mod oracles;
pub mod quad;
pub mod tables;
pub mod transform;

pub use error::{Error, Result};
pub use jacobi::JacobiParams;
pub use lagrange::NodeGrid;
pub use operator::{
    build_initial_vector, build_matrix, max_error_study, price, propagate, spot_grid, ErrorStudy, InitialVector,
    MatrixPricer, PhaseTimings, PriceResult, Reference, TransitionMatrix,
};
pub use oracles::{
    bs_vanilla_call, continuity_correction, continuous_down_out_price, mc_price, single_barrier_price, DownAndOut,
    McConfig, McEstimate,
};
pub use quad::QuadConfig;
pub use transform::{assemble_price, heat_kernel, payoff_g0, to_heat, HeatProblem, OptionContract};
