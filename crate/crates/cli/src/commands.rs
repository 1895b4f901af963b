use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use reflectwalk::asymptotics::{constants_closed_form, constants_root_sum, decomposition_eval, AsymptoticModel};
use reflectwalk::dp::expected_positions_dp;
use reflectwalk::montecarlo::estimate_expectation;
use reflectwalk::series::expected_positions_series;
use reflectwalk::spectral::{spectrum_report_with, SpectralOptions, SpectrumReport};
use reflectwalk::{CaseVariant, JumpDistribution, WalkError};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::format::{csv_text, Precision};

pub const MAX_MOMENT_ORDER: u32 = 16;
pub const DEFAULT_VERIFY_PATHS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub precision: Precision,
    pub json: bool,
}

/// Rendered command output; `ok` is false when a requested check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub body: String,
    pub ok: bool,
}

impl Report {
    fn ok(body: String) -> Self {
        Report { body, ok: true }
    }
}

fn f(q: &num_rational::BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

pub fn table(config: &RunConfig, opts: &Options) -> Result<Report, CliError> {
    let d = config.distribution()?;
    let j = config.j;
    let n_max = *config.n_values.last().expect("validated non-empty") as usize;
    let dp = expected_positions_dp(&d, j, n_max);
    let series = expected_positions_series(&d, j, n_max);
    let model = AsymptoticModel::new(&d)?;

    let header = ["n", "I", "I+II", "I+II+III", "exact_dp", "exact_series", "abs_err", "err_times_n32"];
    let p = opts.precision;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for &n in &config.n_values {
        let k = n as usize;
        if dp[k] != series[k] {
            return Err(CliError::Check(format!(
                "exact routes disagree at n={n}: dp={} series={}",
                dp[k], series[k]
            )));
        }
        let exact = f(&dp[k]);
        let breakdown = match model.expectation(j, n) {
            Ok(b) => Some(b),
            Err(WalkError::A4Violated { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        let mut row = vec![n.to_string()];
        match breakdown {
            Some(b) => {
                let err = (exact - b.total).abs();
                row.extend([p.fmt(b.term1), p.fmt(b.term1 + b.term2), p.fmt(b.total)]);
                row.extend([p.fmt(exact), p.fmt(f(&series[k])), p.fmt(err), p.fmt(err * (n as f64).powf(1.5))]);
                json_rows.push(json!({
                    "n": n, "I": b.term1, "I+II": b.term1 + b.term2, "I+II+III": b.total,
                    "exact": dp[k].to_string(), "exact_dp": exact, "exact_series": f(&series[k]),
                    "abs_err": err, "err_times_n32": err * (n as f64).powf(1.5),
                }));
            }
            None => {
                row.extend([String::new(), String::new(), String::new()]);
                row.extend([p.fmt(exact), p.fmt(f(&series[k])), String::new(), String::new()]);
                json_rows.push(json!({
                    "n": n, "I": null, "I+II": null, "I+II+III": null,
                    "exact": dp[k].to_string(), "exact_dp": exact, "exact_series": f(&series[k]),
                    "abs_err": null, "err_times_n32": null,
                }));
            }
        }
        rows.push(row);
    }
    if opts.json {
        return Ok(Report::ok(pretty(&json!({
            "case": model.case().variant.to_string(),
            "j": j,
            "rows": json_rows,
        }))));
    }
    Ok(Report::ok(csv_text(&header, &rows)))
}

fn a4_line(d: &JumpDistribution, report: &SpectrumReport) -> String {
    if d.classify_case().variant == CaseVariant::P0One {
        "A4 violated: double root at 1".to_string()
    } else if report.squarefree {
        format!("A4 holds: min root separation {:.3e}", report.separation)
    } else {
        format!("A4 violated: min root separation {:.3e}", report.separation)
    }
}

fn spectral_report(d: &JumpDistribution) -> Result<SpectrumReport, CliError> {
    spectrum_report_with(d, &SpectralOptions::default()).map_err(|e| {
        CliError::Check(format!("[{}] {e}; phi(x) = {}", e.code(), d.phi_polynomial()))
    })
}

pub fn spectrum(config: &RunConfig, opts: &Options) -> Result<Report, CliError> {
    let d = config.distribution()?;
    let report = spectral_report(&d)?;
    let p = opts.precision;
    if opts.json {
        let roots: Vec<Value> = report
            .entries()
            .map(|(a, c, l)| {
                json!({
                    "alpha": [a.re, a.im], "modulus": a.norm(), "class": c.to_string(), "lambda": [l.re, l.im],
                })
            })
            .collect();
        return Ok(Report::ok(pretty(&json!({
            "phi": report.phi.to_string(),
            "psi": report.psi.to_string(),
            "essential_spectrum": [-1, 1],
            "a4": report.squarefree && d.classify_case().variant != CaseVariant::P0One,
            "a4_note": a4_line(&d, &report),
            "separation": if report.separation.is_finite() { json!(report.separation) } else { Value::Null },
            "roots": roots,
        }))));
    }
    let mut out = String::new();
    writeln!(out, "phi(x) = {}", report.phi).unwrap();
    writeln!(out, "psi(x) = {}", report.psi).unwrap();
    writeln!(out, "essential spectrum: [-1, 1]").unwrap();
    writeln!(out, "{}", a4_line(&d, &report)).unwrap();
    writeln!(out).unwrap();
    let header = ["alpha_re", "alpha_im", "modulus", "class", "lambda_re", "lambda_im"];
    let rows: Vec<Vec<String>> = report
        .entries()
        .map(|(a, c, l)| vec![p.fmt(a.re), p.fmt(a.im), p.fmt(a.norm()), c.to_string(), p.fmt(l.re), p.fmt(l.im)])
        .collect();
    out.push_str(&csv_text(&header, &rows));
    Ok(Report::ok(out))
}

pub fn simulate(config: &RunConfig, opts: &Options) -> Result<Report, CliError> {
    let paths = config.paths.ok_or(CliError::Missing("paths"))?;
    let seed = config.seed.ok_or(CliError::Missing("seed"))?;
    let d = config.distribution()?;
    let n_max = *config.n_values.last().expect("validated non-empty") as usize;
    let exact = expected_positions_dp(&d, config.j, n_max);
    let p = opts.precision;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for &n in &config.n_values {
        let est = estimate_expectation(&d, config.j, n as usize, paths, seed)?;
        let e = f(&exact[n as usize]);
        let z = z_score(est.mean, e, est.stderr);
        rows.push(vec![n.to_string(), p.fmt(est.mean), p.fmt(est.stderr), p.fmt(e), p.fmt(z)]);
        json_rows.push(json!({
            "n": n, "mc_mean": est.mean, "mc_stderr": est.stderr, "exact_dp": e,
            "z_score": if z.is_finite() { json!(z) } else { Value::Null },
        }));
    }
    if opts.json {
        return Ok(Report::ok(pretty(&json!({ "paths": paths, "seed": seed, "rows": json_rows }))));
    }
    Ok(Report::ok(csv_text(&["n", "mc_mean", "mc_stderr", "exact_dp", "z_score"], &rows)))
}

/// Zero spread with an exact hit counts as a perfect score.
fn z_score(mean: f64, exact: f64, stderr: f64) -> f64 {
    if stderr == 0.0 {
        if mean == exact { 0.0 } else { f64::INFINITY }
    } else {
        (mean - exact) / stderr
    }
}

pub fn moments(config: &RunConfig, opts: &Options, max_order: u32) -> Result<Report, CliError> {
    let d = config.distribution()?;
    let max_order = max_order.clamp(1, MAX_MOMENT_ORDER);
    let case = d.classify_case();
    let moments: Vec<_> = (1..=max_order).map(|k| d.moment(k)).collect();
    if opts.json {
        let list: Vec<Value> = moments
            .iter()
            .zip(1..)
            .map(|(m, k)| json!({ "k": k, "exact": m.to_string(), "value": f(m) }))
            .collect();
        return Ok(Report::ok(pretty(&json!({
            "case": case.variant.to_string(),
            "a1": case.a1,
            "a2": case.a2,
            "h": d.h_polynomial().to_string(),
            "phi": d.phi_polynomial().to_string(),
            "moments": list,
        }))));
    }
    let rows: Vec<Vec<String>> = moments
        .iter()
        .zip(1..)
        .map(|(m, k): (_, u32)| vec![k.to_string(), m.to_string(), opts.precision.fmt(f(m))])
        .collect();
    Ok(Report::ok(csv_text(&["k", "exact", "value"], &rows)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: String) -> Self {
        let status = if pass { Status::Pass } else { Status::Fail };
        Check { name, status, detail }
    }

    fn skip(name: &'static str, reason: &str) -> Self {
        Check {
            name,
            status: Status::Skip,
            detail: reason.to_string(),
        }
    }
}

/// Twenty points of a sunflower spiral filling the disk `|z| <= 1/2`.
pub fn verification_points() -> Vec<Complex64> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..20)
        .map(|k| Complex64::from_polar(0.5 * ((k as f64 + 0.5) / 20.0).sqrt(), golden * k as f64))
        .collect()
}

/// Runs every cross-route check that applies to the configured law.
pub fn run_checks(config: &RunConfig) -> Result<Vec<Check>, CliError> {
    let d = config.distribution()?;
    let j = config.j;
    let variant = d.classify_case().variant;
    let mut checks = Vec::new();

    let dp = expected_positions_dp(&d, j, 60);
    let series = expected_positions_series(&d, j, 60);
    let mismatch = (0..=60).find(|&n| dp[n] != series[n]);
    checks.push(Check::new(
        "dp_series",
        mismatch.is_none(),
        match mismatch {
            None => "exact agreement for n <= 60".to_string(),
            Some(n) => format!("n={n}: dp={} series={}", dp[n], series[n]),
        },
    ));

    let report = if variant == CaseVariant::P0One { None } else { Some(spectral_report(&d)?) };
    let skip_reason = match (&report, variant) {
        (None, _) => Some("P0_ONE"),
        (Some(r), _) if !r.squarefree => Some("A4_VIOLATED"),
        _ => None,
    };
    let root_sum_reason = skip_reason.or((variant == CaseVariant::SpecialHalfHalf).then_some("SPECIAL_HALF_HALF"));

    match (root_sum_reason, &report) {
        (None, Some(rep)) => {
            let rs = constants_root_sum(&d, rep)?;
            let cf = constants_closed_form(&d)?;
            let dev = [rs.c1 - cf.c1, rs.c2 - cf.c2, rs.c3 - cf.c3].iter().fold(0.0f64, |m, e| m.max(e.abs()));
            checks.push(Check::new(
                "constants",
                dev < 1e-10,
                format!("root-sum vs closed form: max deviation {dev:.3e} (c1={:.10}, c2={:.10})", cf.c1, cf.c2),
            ));

            let coeffs: Vec<f64> = expected_positions_series(&d, 0, 120).iter().map(f).collect();
            let mut worst = (0.0f64, Complex64::new(0.0, 0.0));
            for z in verification_points() {
                let partial = coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
                let err = (partial - decomposition_eval(&d, rep, z)?).norm();
                if err >= worst.0 {
                    worst = (err, z);
                }
            }
            checks.push(Check::new(
                "decomposition",
                worst.0 < 1e-9,
                format!("max |series - closed form| {:.3e} at z={:.4}", worst.0, worst.1),
            ));
        }
        (reason, _) => {
            let reason = reason.unwrap_or("NO_PSI_ROOTS");
            checks.push(Check::skip("constants", reason));
            checks.push(Check::skip("decomposition", reason));
        }
    }

    match skip_reason {
        None => {
            let model = AsymptoticModel::new(&d)?;
            let exact = expected_positions_dp(&d, j, 400);
            let r = |n: u64| (f(&exact[n as usize]) - model.expectation(j, n).map(|b| b.total).unwrap_or(f64::NAN)).abs();
            let ratio = r(100) / r(400);
            checks.push(Check::new(
                "residual_ratio",
                (4.0..=16.0).contains(&ratio),
                format!("r(100)/r(400) = {ratio:.4} (expected in [4, 16])"),
            ));
        }
        Some(reason) => checks.push(Check::skip("residual_ratio", reason)),
    }

    let n = *config.n_values.last().expect("validated non-empty");
    let paths = config.paths.unwrap_or(DEFAULT_VERIFY_PATHS).max(2);
    let seed = config.seed.unwrap_or(0);
    let est = estimate_expectation(&d, j, n as usize, paths, seed)?;
    let exact = f(&expected_positions_dp(&d, j, n as usize)[n as usize]);
    checks.push(Check::new(
        "monte_carlo",
        (est.mean - exact).abs() <= 3.0 * est.stderr,
        format!(
            "n={n}, {paths} paths: mean {:.6} stderr {:.6} exact {exact:.6}",
            est.mean, est.stderr
        ),
    ));
    Ok(checks)
}

pub fn verify(config: &RunConfig, opts: &Options) -> Result<Report, CliError> {
    let checks = run_checks(config)?;
    let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
    let passed = checks.iter().filter(|c| c.status == Status::Pass).count();
    let skipped = checks.len() - failed - passed;
    let label = |s: Status| match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skip => "SKIP",
    };
    let body = if opts.json {
        let list: Vec<Value> = checks
            .iter()
            .map(|c| json!({ "name": c.name, "status": label(c.status), "detail": c.detail }))
            .collect();
        pretty(&json!({ "checks": list, "passed": passed, "failed": failed, "skipped": skipped }))
    } else {
        let mut out = String::new();
        for c in &checks {
            writeln!(out, "{} {}: {}", label(c.status), c.name, c.detail).unwrap();
        }
        writeln!(out, "{passed} passed, {failed} failed, {skipped} skipped").unwrap();
        out
    };
    Ok(Report { body, ok: failed == 0 })
}
