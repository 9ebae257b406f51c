use std::time::Instant;

use jacobi_barrier::tables::{run_table, TABLE_IDS};
use jacobi_barrier::{
    max_error_study, mc_price, spot_grid, MatrixPricer, McConfig, McEstimate, OptionContract, PriceResult, Reference,
};
use serde_json::{json, Value};

use crate::config::{Method, Settings};
use crate::report::{Report, Row};
use crate::Failure;

/// Matrix and Monte Carlo prices count as agreeing within this many
/// standard errors.
const AGREEMENT_SE: f64 = 4.0;

/// Largest allowed spread of wall time across date counts.
const TIMING_RATIO_LIMIT: f64 = 1.5;

/// A rendered-to-be report plus whether every criterion in it held.
pub struct Outcome {
    pub report: Report,
    pub ok: bool,
}

fn contract_params(report: &mut Report, c: &OptionContract) {
    report
        .param("spot", c.spot)
        .param("strike", c.strike)
        .param("lower", c.lower)
        .param("upper", c.upper)
        .param("rate", c.rate)
        .param("vol", c.vol)
        .param("expiry", c.expiry)
        .param("dates", c.dates);
}

fn pricer_params(report: &mut Report, p: &MatrixPricer) {
    report.param("nodes", p.nodes).param("a", p.jacobi.a).param("b", p.jacobi.b);
}

fn mc_params(report: &mut Report, cfg: &McConfig) {
    report.param("paths", cfg.paths).param("seed", cfg.seed).param("antithetic", cfg.antithetic);
}

fn finite(v: f64, what: &str) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Numerical(format!("{what} is not finite ({v})")))
    }
}

fn timing_note(r: &PriceResult) -> String {
    let t = r.timings;
    format!(
        "timings: matrix {:.3} ms, vector {:.3} ms, propagate {:.3} ms, evaluate {:.3} ms",
        t.build_matrix * 1e3,
        t.build_vector * 1e3,
        t.propagate * 1e3,
        t.evaluate * 1e3
    )
}

pub fn price(s: &Settings) -> Result<Outcome, Failure> {
    let contract = s.contract();
    contract.validate()?;
    let method = s.method();
    let mut report = Report::new("Double barrier knock-out call");
    contract_params(&mut report, &contract);
    report.param("method", serde_json::to_value(method).expect("enum serializes"));

    let mut matrix = None;
    if method != Method::Mc {
        let pricer = s.pricer()?;
        pricer_params(&mut report, &pricer);
        let r = pricer.price(&contract)?;
        finite(r.price, "price")?;
        report.results.push(Row::value("matrix", r.price));
        report.summarize("price", r.price).summarize("theta", r.theta).summarize("z0", r.z0);
        report.notes.push(timing_note(&r));
        matrix = Some(r.price);
    }
    if method != Method::Matrix {
        let cfg = s.mc()?;
        mc_params(&mut report, &cfg);
        let est = mc_price(&contract, &cfg)?;
        finite(est.price, "Monte Carlo price")?;
        report.results.push(mc_row(&est, matrix));
        report.summarize("mc_price", est.price).summarize("mc_stderr", est.stderr).summarize("mc_paths", est.paths);
        if let Some(m) = matrix {
            let z = (m - est.price).abs() / est.stderr;
            let verdict = if z <= AGREEMENT_SE { "agree" } else { "disagree" };
            report.summarize("agreement", verdict).summarize("stderrs_apart", z);
        } else {
            report.summarize("price", est.price);
        }
    }
    Ok(Outcome { report, ok: true })
}

fn mc_row(est: &McEstimate, matrix: Option<f64>) -> Row {
    match matrix {
        Some(m) => {
            let d = (est.price - m).abs();
            Row {
                target: Some(m),
                abs_diff: Some(d),
                pass: d <= AGREEMENT_SE * est.stderr,
                ..Row::value("mc", est.price)
            }
        }
        None => Row::value("mc", est.price),
    }
}

pub fn curve(s: &Settings, spots: &[f64], points: usize) -> Result<Outcome, Failure> {
    let contract = s.contract();
    contract.validate()?;
    let pricer = s.pricer()?;
    let spots = if spots.is_empty() {
        if points == 0 {
            return Err(Failure::Validation("--points must be at least 1".into()));
        }
        spot_grid(&contract, points)
    } else {
        spots.to_vec()
    };
    let curve = pricer.price_curve(&contract, &spots)?;
    let mut report = Report::new("Price curve");
    report.columns = ("spot", "price");
    contract_params(&mut report, &contract);
    pricer_params(&mut report, &pricer);
    for r in &curve {
        finite(r.price, "price")?;
        report.results.push(Row::value(r.spot.to_string(), r.price));
    }
    report.summarize("points", curve.len());
    if let Some(first) = curve.first() {
        report.notes.push(timing_note(first));
    }
    Ok(Outcome { report, ok: true })
}

pub fn table(id: u32) -> Result<Outcome, Failure> {
    if !TABLE_IDS.contains(&id) {
        return Err(Failure::Validation(format!("unknown table {id}; choose one of {TABLE_IDS:?}")));
    }
    let t = run_table(id)?;
    let mut report = Report::new(format!("Table {}: {}", t.id, t.title));
    report
        .param("id", t.id)
        .param("kind", serde_json::to_value(t.kind).expect("enum serializes"))
        .param("tolerance", t.summary.tolerance);
    for r in &t.rows {
        report.results.push(Row {
            case: r.case.clone(),
            computed: r.computed,
            target: Some(r.target),
            abs_diff: r.abs_diff,
            pass: r.pass,
            expected_fail: r.expected_fail,
            note: r.note.clone(),
        });
    }
    let sm = &t.summary;
    report
        .summarize("cases", sm.cases)
        .summarize("passed", sm.passed)
        .summarize("failed", sm.failed)
        .summarize("expected_failures", sm.expected_failures)
        .summarize("max_abs_diff", sm.max_abs_diff)
        .summarize("all_pass", sm.all_pass);
    Ok(Outcome { report, ok: sm.all_pass })
}

enum ReferenceSpec {
    SelfNodes(usize),
    Value(f64),
}

fn parse_reference(spec: &str) -> Result<ReferenceSpec, Failure> {
    if let Some(n) = spec.strip_prefix("self:") {
        let n: usize = n.parse().map_err(|_| Failure::Validation(format!("bad reference node count in `{spec}`")))?;
        if n == 0 {
            return Err(Failure::Validation("reference node count must be at least 1".into()));
        }
        return Ok(ReferenceSpec::SelfNodes(n));
    }
    spec.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .map(ReferenceSpec::Value)
        .ok_or_else(|| Failure::Validation(format!("reference must be `self:<nodes>` or a price, got `{spec}`")))
}

pub fn converge(
    s: &Settings,
    min_nodes: usize,
    max_nodes: usize,
    step: usize,
    reference: &str,
    points: usize,
) -> Result<Outcome, Failure> {
    if min_nodes == 0 || max_nodes < min_nodes || step == 0 {
        return Err(Failure::Validation(format!(
            "need 1 <= min-nodes <= max-nodes and step >= 1, got {min_nodes}..{max_nodes} step {step}"
        )));
    }
    let contract = s.contract();
    contract.validate()?;
    let base = s.pricer()?;
    let (spots, values) = match parse_reference(reference)? {
        ReferenceSpec::SelfNodes(n) => {
            if points == 0 {
                return Err(Failure::Validation("--points must be at least 1".into()));
            }
            let spots = spot_grid(&contract, points);
            let r = MatrixPricer { nodes: n, ..base }.price_curve(&contract, &spots)?;
            (spots, r.into_iter().map(|r| r.price).collect())
        }
        ReferenceSpec::Value(v) => (vec![contract.spot], vec![v]),
    };
    let reference_values = Reference::Values(values);

    let mut report = Report::new("Max error against node count");
    report.columns = ("nodes", "max_error");
    contract_params(&mut report, &contract);
    report
        .param("a", base.jacobi.a)
        .param("b", base.jacobi.b)
        .param("reference", reference)
        .param("spots", spots.len());
    let mut errors = Vec::new();
    for n in (min_nodes..=max_nodes).step_by(step) {
        let study = max_error_study(&contract, &MatrixPricer { nodes: n, ..base }, &spots, &reference_values)?;
        finite(study.max_abs_error, "max error")?;
        errors.push(study.max_abs_error);
        report.results.push(Row::value(n.to_string(), study.max_abs_error));
    }
    let first = errors[0];
    let last = *errors.last().expect("range is nonempty");
    let increases = errors.windows(2).filter(|w| w[1] > w[0]).count();
    report
        .summarize("first", first)
        .summarize("last", last)
        .summarize("reduction", if last > 0.0 { json!(first / last) } else { Value::Null })
        .summarize("increasing_steps", increases);
    Ok(Outcome { report, ok: true })
}

pub fn timing(s: &Settings, dates_list: &[usize], runs: usize) -> Result<Outcome, Failure> {
    if dates_list.is_empty() || runs == 0 {
        return Err(Failure::Validation("need at least one date count and one run".into()));
    }
    let template = s.contract();
    let pricer = s.pricer()?;
    let mut report = Report::new("Wall time per full price");
    report.columns = ("dates", "seconds");
    contract_params(&mut report, &template);
    pricer_params(&mut report, &pricer);
    report.param("runs", runs);
    let mut medians = Vec::new();
    for &m in dates_list {
        let c = OptionContract { dates: m, ..template };
        c.validate()?;
        pricer.price(&c)?;
        let mut times: Vec<f64> = (0..runs)
            .map(|_| {
                let t = Instant::now();
                let r = pricer.price(&c);
                let dt = t.elapsed().as_secs_f64();
                r.map(|_| dt)
            })
            .collect::<Result<_, _>>()?;
        times.sort_by(f64::total_cmp);
        let median = times[times.len() / 2];
        medians.push(median);
        report.results.push(Row::value(m.to_string(), median));
    }
    let max = medians.iter().cloned().fold(f64::MIN, f64::max);
    let min = medians.iter().cloned().fold(f64::MAX, f64::min);
    let ratio = max / min;
    let ok = ratio <= TIMING_RATIO_LIMIT;
    report.summarize("ratio", ratio).summarize("limit", TIMING_RATIO_LIMIT).summarize("pass", ok);
    Ok(Outcome { report, ok })
}

pub fn mc(s: &Settings) -> Result<Outcome, Failure> {
    let contract = s.contract();
    let cfg = s.mc()?;
    let est = mc_price(&contract, &cfg)?;
    finite(est.price, "Monte Carlo price")?;
    let mut report = Report::new("Monte Carlo estimate");
    contract_params(&mut report, &contract);
    mc_params(&mut report, &cfg);
    report.results.push(Row::value("mc", est.price));
    report.summarize("price", est.price).summarize("stderr", est.stderr).summarize("paths", est.paths);
    Ok(Outcome { report, ok: true })
}
