//! Report rendering: JSON (17 significant digits), CSV with a header row,
//! and aligned text (6 significant digits).

use super::commands::{EvalReport, ReproduceReport, SweepReport};
use super::config::OutputFormat;
use crate::evaluation::{AnalyticSummary, EstimatorSummary};
use crate::numfmt::{fmt17, fmt6};
use crate::regions::RealSet;

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialises");
    s.push('\n');
    s
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

fn opt(x: Option<f64>, f: fn(f64) -> String) -> String {
    x.map(f).unwrap_or_default()
}

fn set_text(s: &RealSet) -> String {
    if s.is_empty() {
        return "{}".into();
    }
    s.intervals()
        .iter()
        .map(|iv| format!("({}, {})", fmt6(iv.lo), fmt6(iv.hi)))
        .collect::<Vec<_>>()
        .join(" U ")
}

const GRID_HEADER: [&str; 10] = [
    "estimator",
    "theta",
    "nominal",
    "coverage_analytic",
    "coverage_mc",
    "coverage_stderr",
    "size_analytic",
    "size_mc",
    "size_stderr",
    "n",
];

fn grid_rows(results: &[EstimatorSummary], f: fn(f64) -> String) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for r in results {
        for (c, s) in r.coverage.iter().zip(&r.size) {
            rows.push(vec![
                r.name.clone(),
                c.theta.to_string(),
                f(c.nominal),
                opt(c.analytic, f),
                f(c.mc_estimate),
                f(c.mc_stderr),
                opt(s.analytic_expected_size, f),
                f(s.mc_expected_size),
                f(s.mc_stderr),
                c.n_samples.to_string(),
            ]);
        }
    }
    rows
}

pub fn render_eval(report: &EvalReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json(report),
        OutputFormat::Csv => csv_table(&GRID_HEADER, &grid_rows(&report.results, fmt17)),
        OutputFormat::Text => {
            let mut out = text_table(&GRID_HEADER, &grid_rows(&report.results, fmt6));
            if !report.dominance.is_empty() {
                out.push('\n');
                let rows: Vec<Vec<String>> = report
                    .dominance
                    .iter()
                    .map(|d| {
                        vec![
                            d.a.clone(),
                            d.b.clone(),
                            d.verdict.weakly_no_larger_everywhere.to_string(),
                            d.verdict.strictly_smaller_somewhere.to_string(),
                        ]
                    })
                    .collect();
                out.push_str(&text_table(
                    &["a", "b", "no_larger_everywhere", "strictly_smaller_somewhere"],
                    &rows,
                ));
            }
            out
        }
    }
}

pub fn render_reproduce(report: &ReproduceReport, format: OutputFormat) -> String {
    let r = &report.result;
    let check_rows = || -> Vec<Vec<String>> {
        r.checks
            .iter()
            .map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()])
            .collect()
    };
    match format {
        OutputFormat::Json => json(report),
        OutputFormat::Csv => csv_table(&["check", "passed", "detail"], &check_rows()),
        OutputFormat::Text => {
            let a = &r.analytic;
            let mut out = format!(
                "status: {:?}\nsigma0 {}  sigma1 {}  delta {}  n {}  seed {}\n\
                 nesting {}  mass_condition {}  mu0 {}\n\
                 omega0  {}\nomega1  {}\nomega0' {}\n\n",
                r.status,
                fmt6(a.sigma0),
                fmt6(a.sigma1),
                fmt6(a.delta),
                r.n,
                r.seed,
                a.regime.nesting,
                a.regime.mass_condition,
                fmt6(a.mu0),
                set_text(&a.omega0),
                set_text(&a.omega1),
                a.omega0_prime.as_ref().map(set_text).unwrap_or_else(|| "-".into()),
            );
            if !r.estimators.is_empty() {
                out.push_str(&text_table(&GRID_HEADER, &grid_rows(&r.estimators, fmt6)));
                out.push('\n');
                let mut rows = check_rows();
                rows.iter_mut().for_each(|row| row.truncate(2));
                out.push_str(&text_table(&["check", "passed"], &rows));
            }
            out
        }
    }
}

const SWEEP_HEADER: [&str; 12] = [
    "sigma0",
    "sigma1",
    "delta",
    "mu0",
    "two_delta",
    "nesting",
    "mass_condition",
    "fiducial_size_theta0",
    "fiducial_size_theta1",
    "improved_size_theta0",
    "improved_size_theta1",
    "size_gap_theta1",
];

fn sweep_rows(rows: &[AnalyticSummary], f: fn(f64) -> String) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            let imp = r.improved_size;
            vec![
                f(r.sigma0),
                f(r.sigma1),
                f(r.delta),
                f(r.mu0),
                f(2.0 * r.delta),
                r.regime.nesting.to_string(),
                r.regime.mass_condition.to_string(),
                f(r.fiducial_size[0].0),
                f(r.fiducial_size[1].0),
                opt(imp.map(|s| s[0].0), f),
                opt(imp.map(|s| s[1].0), f),
                opt(imp.map(|s| r.fiducial_size[1].0 - s[1].0), f),
            ]
        })
        .collect()
}

pub fn render_sweep(report: &SweepReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json(report),
        OutputFormat::Csv => csv_table(&SWEEP_HEADER, &sweep_rows(&report.rows, fmt17)),
        OutputFormat::Text => text_table(&SWEEP_HEADER, &sweep_rows(&report.rows, fmt6)),
    }
}
