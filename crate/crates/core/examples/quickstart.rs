//! Prices a double barrier call, sweeps the spot, and cross-checks with
//! Monte Carlo.

use jacobi_barrier::{mc_price, spot_grid, JacobiParams, MatrixPricer, McConfig, OptionContract};

fn main() -> jacobi_barrier::Result<()> {
    let contract = OptionContract {
        spot: 100.0,
        strike: 100.0,
        lower: 95.0,
        upper: 120.0,
        rate: 0.05,
        vol: 0.25,
        expiry: 0.5,
        dates: 125,
    };
    let pricer = MatrixPricer::new(25, JacobiParams::CHEBYSHEV);

    let r = pricer.price(&contract)?;
    println!("price {:.6} in {:.2} ms", r.price, r.timings.total() * 1e3);

    for p in pricer.price_curve(&contract, &spot_grid(&contract, 6))? {
        println!("  S0 = {:>6.2}  {:.6}", p.spot, p.price);
    }

    let mc = mc_price(&contract, &McConfig { paths: 200_000, ..Default::default() })?;
    println!("monte carlo {:.6} +/- {:.6}", mc.price, mc.stderr);
    Ok(())
}
