//! Acceptance criteria A1-A8. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails. Targets are written out here rather than read
//! from the bundled case data so a typo there cannot hide a regression.

use std::process::ExitCode;
use std::time::Instant;

use jacobi_barrier::jacobi::{eval_jacobi, jacobi_roots, orthogonality_residual, sup_norm_estimate};
use jacobi_barrier::quad::{gauss_legendre_panel, gaussian_exp_moment};
use jacobi_barrier::{
    bs_vanilla_call, build_initial_vector, build_matrix, continuous_down_out_price, heat_kernel, max_error_study,
    mc_price, propagate, single_barrier_price, spot_grid, to_heat, DownAndOut, JacobiParams, MatrixPricer, McConfig,
    NodeGrid, OptionContract, QuadConfig, Reference,
};

type Criterion = (&'static str, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn example1(lower: f64, dates: usize) -> OptionContract {
    OptionContract { spot: 100.0, strike: 100.0, lower, upper: 120.0, rate: 0.05, vol: 0.25, expiry: 0.5, dates }
}

fn example2(spot: f64) -> OptionContract {
    OptionContract { spot, strike: 100.0, lower: 95.0, upper: 110.0, rate: 0.05, vol: 0.25, expiry: 0.5, dates: 5 }
}

fn cheb(nodes: usize) -> MatrixPricer {
    MatrixPricer::new(nodes, JacobiParams::CHEBYSHEV)
}

/// Checks `(label, computed, target)` rows against `tol`, reporting the worst.
fn compare(rows: &[(String, f64, f64)], tol: f64, budget: f64, elapsed: f64) -> Outcome {
    let mut worst = (String::new(), 0.0f64);
    let mut failed = Vec::new();
    for (label, got, want) in rows {
        let d = (got - want).abs();
        if d > worst.1 {
            worst = (label.clone(), d);
        }
        if d.is_nan() || d > tol {
            failed.push(format!("{label}: {got:.6} vs {want}"));
        }
    }
    let in_time = elapsed < budget;
    let mut detail = format!(
        "{} cases, max |diff| {:.2e} at {} (tol {tol:e}), {elapsed:.2}s (budget {budget}s)",
        rows.len(),
        worst.1,
        worst.0
    );
    if !failed.is_empty() {
        detail.push_str(&format!("; failing: {}", failed.join(", ")));
    }
    outcome(failed.is_empty() && in_time, detail)
}

fn a1() -> Outcome {
    let targets = [
        (80.0, 5, 2.4499),
        (90.0, 5, 2.2028),
        (95.0, 5, 1.6831),
        (99.0, 5, 1.0811),
        (99.9, 5, 0.9432),
        (80.0, 25, 1.9420),
        (90.0, 25, 1.5354),
        (95.0, 25, 0.8668),
        (99.0, 25, 0.2931),
        (99.9, 25, 0.2023),
        (80.0, 125, 1.6808),
        (90.0, 125, 1.2029),
        (95.0, 125, 0.5532),
        (99.0, 125, 0.1042),
        (99.9, 125, 0.0513),
    ];
    let start = Instant::now();
    let rows: Vec<_> = targets
        .iter()
        .map(|&(l, m, t)| {
            let p = cheb(25).price(&example1(l, m)).map(|r| r.price).unwrap_or(f64::NAN);
            (format!("L={l} M={m}"), p, t)
        })
        .collect();
    compare(&rows, 5e-4, 5.0, start.elapsed().as_secs_f64())
}

fn a2() -> Outcome {
    let targets = [
        (95.0, 0.174498),
        (95.0001, 0.174499),
        (95.5, 0.182428),
        (99.5, 0.229349),
        (100.0, 0.232508),
        (100.5, 0.234972),
        (109.5, 0.174462),
        (109.9999, 0.167394),
        (110.0, 0.167393),
    ];
    let start = Instant::now();
    let spots: Vec<f64> = targets.iter().map(|t| t.0).collect();
    let rows: Vec<_> = match cheb(25).price_curve(&example2(100.0), &spots) {
        Ok(curve) => curve.iter().zip(&targets).map(|(r, &(s, t))| (format!("S0={s}"), r.price, t)).collect(),
        Err(e) => return outcome(false, e.to_string()),
    };
    compare(&rows, 2e-5, 2.0, start.elapsed().as_secs_f64())
}

fn a3() -> Outcome {
    let targets = [(95.0, 25, 6.63156), (99.5, 125, 1.96130), (99.9, 125, 1.51068)];
    let start = Instant::now();
    let rows: Vec<_> = targets
        .iter()
        .map(|&(lower, dates, t)| {
            let d = DownAndOut { spot: 100.0, strike: 100.0, lower, rate: 0.1, vol: 0.2, expiry: 0.5, dates };
            let p = single_barrier_price(&d, &cheb(50)).map(|r| r.price).unwrap_or(f64::NAN);
            (format!("L={lower} M={dates}"), p, t)
        })
        .collect();
    compare(&rows, 2e-4, 3.0, start.elapsed().as_secs_f64())
}

fn a4() -> Outcome {
    let start = Instant::now();
    let c = example1(95.0, 125);
    let spots = spot_grid(&c, 50);
    let reference = match cheb(100).price_curve(&c, &spots) {
        Ok(r) => Reference::Values(r.into_iter().map(|r| r.price).collect()),
        Err(e) => return outcome(false, e.to_string()),
    };
    let vals = [-0.8, -0.5, 0.0, 0.5, 0.8];
    let mut rows = Vec::new();
    for a in vals {
        for b in vals {
            let err = JacobiParams::new(a, b)
                .and_then(|p| max_error_study(&c, &MatrixPricer::new(25, p), &spots, &reference))
                .map(|s| s.max_abs_error)
                .unwrap_or(f64::NAN);
            // the criterion is an upper bound, so compare the error against zero
            rows.push((format!("a={a} b={b}"), err, 0.0));
        }
    }
    compare(&rows, 5e-4, 20.0, start.elapsed().as_secs_f64())
}

fn median_time(contract: &OptionContract) -> f64 {
    let pricer = cheb(25);
    let _ = pricer.price(contract);
    let mut times: Vec<f64> = (0..5)
        .map(|_| {
            let t = Instant::now();
            let _ = pricer.price(contract);
            t.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[2]
}

fn a5() -> Outcome {
    let short = median_time(&example1(95.0, 5));
    let long = median_time(&example1(95.0, 125));
    let ratio = long / short;
    outcome(
        ratio <= 1.5,
        format!("median M=125 {:.3}ms, M=5 {:.3}ms, ratio {ratio:.3} (limit 1.5)", long * 1e3, short * 1e3),
    )
}

fn a6() -> Outcome {
    let start = Instant::now();
    let cfg = McConfig::default();
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, c) in [("example 1 L=95 M=5", example1(95.0, 5)), ("example 2 S0=100", example2(100.0))] {
        match (cheb(25).price(&c), mc_price(&c, &cfg)) {
            (Ok(p), Ok(mc)) => {
                let z = (p.price - mc.price).abs() / mc.stderr;
                pass &= z <= 4.0;
                parts.push(format!("{name}: matrix {:.6} mc {:.6} ± {:.6} ({z:.2} se)", p.price, mc.price, mc.stderr));
            }
            (Err(e), _) | (_, Err(e)) => return outcome(false, e.to_string()),
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    parts.push(format!("{} paths, {elapsed:.2}s (budget 15s)", cfg.paths));
    outcome(pass && elapsed < 15.0, parts.join("; "))
}

fn a7() -> Outcome {
    let targets = [(85.0, 6.308), (88.0, 6.185), (91.0, 5.808), (93.0, 5.277), (95.0, 4.398), (97.0, 3.060)];
    let start = Instant::now();
    let price = |lower: f64, dates: usize, nodes: usize| {
        let d = DownAndOut { spot: 100.0, strike: 100.0, lower, rate: 0.1, vol: 0.3, expiry: 0.2, dates };
        continuous_down_out_price(&d, &cheb(nodes)).map(|r| r.price).unwrap_or(f64::NAN)
    };
    let mut rows = Vec::new();
    for dates in [50, 125] {
        for nodes in [25, 50] {
            for &(l, t) in &targets {
                rows.push((format!("L={l} M={dates} n={nodes}"), price(l, dates, nodes), t));
            }
        }
    }
    let near = price(99.0, 125, 50);
    let elapsed = start.elapsed().as_secs_f64();
    let mut o = compare(&rows, 8e-3, 5.0, elapsed);
    o.detail.push_str(&format!("; expected-fail L=99 M=125: {near:.4} vs 1.171"));
    o
}

fn a8() -> Outcome {
    let start = Instant::now();
    let mut failures: Vec<String> = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };

    for (t, c2) in [(0.1, 0.03125), (1e-3, 0.5), (2.0, 0.02)] {
        let w = 12.0 * f64::sqrt(2.0 * c2 * t);
        let mass: f64 = (0..64)
            .map(|k| {
                let a = -w + 2.0 * w * k as f64 / 64.0;
                gauss_legendre_panel(|z| heat_kernel(z, t, c2).unwrap(), a, a + 2.0 * w / 64.0, 30)
            })
            .sum();
        check((mass - 1.0).abs() <= 1e-12, "kernel normalization");
    }

    let params = [-0.8, -0.5, 0.0, 0.5, 0.8];
    for &a in &params {
        for &b in &params {
            let p = JacobiParams::new(a, b).unwrap();
            for count in [5, 25, 50] {
                let roots = match jacobi_roots(p, count) {
                    Ok(r) => r,
                    Err(_) => {
                        check(false, "jacobi roots");
                        continue;
                    }
                };
                let sup = sup_norm_estimate(p, count);
                check(roots.iter().all(|&x| eval_jacobi(p, count, x).abs() <= 1e-12 * sup), "root residuals");
                let grid = NodeGrid::with_nodes(p, count, 0.3).unwrap();
                let mut basis = vec![0.0; count];
                for k in 0..50 {
                    grid.basis_all(0.3 * k as f64 / 49.0, &mut basis);
                    check((basis.iter().sum::<f64>() - 1.0).abs() <= 1e-12, "partition of unity");
                }
            }
            for i in 0..8 {
                for j in 0..i {
                    check(orthogonality_residual(p, i, j, 64).abs() <= 1e-8, "orthogonality");
                }
            }
        }
    }
    let n = 25;
    let mut roots = jacobi_roots(JacobiParams::CHEBYSHEV, n).unwrap();
    roots.sort_by(f64::total_cmp);
    let mut closed: Vec<f64> =
        (0..n).map(|k| (std::f64::consts::PI * (2 * k + 1) as f64 / (2 * n) as f64).cos()).collect();
    closed.sort_by(f64::total_cmp);
    check(roots.iter().zip(&closed).all(|(r, c)| (r - c).abs() <= 1e-12), "chebyshev closed-form roots");

    let hp = to_heat(&example1(95.0, 5)).unwrap();
    let grid = NodeGrid::with_nodes(JacobiParams::CHEBYSHEV, 25, hp.theta).unwrap();
    let k = build_matrix(&grid, &hp, &QuadConfig::default()).unwrap();
    for (i, &x) in grid.nodes().iter().enumerate() {
        let mass = gaussian_exp_moment(x, 0.0, 0.0, hp.theta, hp.tau, hp.diffusion).unwrap();
        check((k.row(i).iter().sum::<f64>() - mass).abs() <= 1e-9, "row sum vs erf mass");
    }

    for &(x, lambda) in &[(0.0, 1.3), (0.1, -0.3), (0.25, 0.7), (0.5, 2.0)] {
        let (lo, hi) = (0.05, hp.theta);
        let exact = gaussian_exp_moment(x, lambda, lo, hi, hp.tau, hp.diffusion).unwrap();
        let panels = 400;
        let brute: f64 = (0..panels)
            .map(|q| {
                let a = lo + (hi - lo) * q as f64 / panels as f64;
                let b = lo + (hi - lo) * (q + 1) as f64 / panels as f64;
                gauss_legendre_panel(
                    |s| heat_kernel(x - s, hp.tau, hp.diffusion).unwrap() * (lambda * s).exp(),
                    a,
                    b,
                    20,
                )
            })
            .sum();
        check((exact - brute).abs() <= 1e-10 * brute.abs(), "exp moment vs brute force");
    }

    let g1 = build_initial_vector(&grid, &hp).unwrap();
    let stepwise = propagate(&k, &g1, 3).unwrap();
    let size = k.size();
    let scale = stepwise.iter().map(|v| v.abs()).fold(0.0, f64::max);
    for (i, s) in stepwise.iter().enumerate() {
        let direct: f64 =
            (0..size).map(|j| (0..size).map(|l| k.get(i, l) * k.get(l, j)).sum::<f64>() * g1.values[j]).sum();
        check((direct - s).abs() <= 1e-12 * scale, "propagate associativity");
    }

    for m in [5, 25, 125] {
        let prices: Vec<f64> =
            [80.0, 90.0, 95.0, 99.0, 99.9].iter().map(|&l| cheb(25).price(&example1(l, m)).unwrap().price).collect();
        check(prices.windows(2).all(|w| w[0] > w[1]), "L-monotonicity");
        let vanilla = bs_vanilla_call(100.0, 100.0, 0.05, 0.25, 0.5);
        check(prices.iter().all(|&p| p <= vanilla && p >= -1e-9), "vanilla dominance");
    }

    let elapsed = start.elapsed().as_secs_f64();
    failures.dedup();
    let detail = if failures.is_empty() {
        format!("all properties hold, {elapsed:.2}s (budget 10s)")
    } else {
        format!("violated: {}, {elapsed:.2}s", failures.join(", "))
    };
    outcome(failures.is_empty() && elapsed < 10.0, detail)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("A1", "benchmark prices across lower barriers and dates", a1),
        ("A2", "spot sweep on the narrow corridor", a2),
        ("A3", "single barrier through a remote upper barrier", a3),
        ("A4", "robustness to the Jacobi parameters", a4),
        ("A5", "cost flat in the number of dates", a5),
        ("A6", "agreement with Monte Carlo", a6),
        ("A7", "continuity-corrected prices", a7),
        ("A8", "property suite", a8),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("{id} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
