//! Runs experiments and renders their results as CSV.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use risnoma::{monte_carlo, MonteCarloSummary, SchemeId};

use crate::error::{CliError, Result};
use crate::experiment::{Experiment, SweepVar, Variant};

pub const CSV_COLUMNS: [&str; 17] = [
    "sweep_var",
    "sweep_value",
    "scheme",
    "trials",
    "avg_secrecy_rate",
    "avg_secrecy_rate_normalized",
    "sop",
    "infeasible_fraction",
    "mean_alg1_iters",
    "seed",
    "ns",
    "nr",
    "m",
    "secrecy_rate_stderr",
    "avg_h1",
    "avg_h2",
    "relative_error",
];

/// One `(variant, sweep value, scheme)` result.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub sweep_var: SweepVar,
    pub sweep_value: f64,
    pub scheme: SchemeId,
    pub variant: Variant,
    pub seed: u64,
    pub summary: MonteCarloSummary,
    /// `avg_secrecy_rate` divided by the largest average in the experiment.
    pub normalized: f64,
}

/// Validates and runs every sweep point. Rows are ordered by variant, then
/// sweep value, then scheme.
pub fn run_experiment(exp: &Experiment) -> Result<Vec<Row>> {
    exp.validate()?;
    let mut rows = Vec::new();
    for point in exp.points()? {
        for &scheme in &exp.schemes {
            log::debug!("{} = {} {scheme} {:?}", exp.sweep.var, point.value, point.variant);
            let summary = monte_carlo(scheme, &point.scenario, exp.trials, exp.seed)?;
            rows.push(Row {
                sweep_var: exp.sweep.var,
                sweep_value: point.value,
                scheme,
                variant: point.variant,
                seed: exp.seed,
                summary,
                normalized: 0.0,
            });
        }
    }
    let max = rows.iter().map(|r| r.summary.avg_secrecy_rate).fold(0.0, f64::max);
    for row in &mut rows {
        row.normalized = if max > 0.0 { row.summary.avg_secrecy_rate / max } else { 0.0 };
    }
    Ok(rows)
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.8e}")
    }
}

pub fn render_csv(rows: &[Row]) -> String {
    let mut out = CSV_COLUMNS.join(",");
    out.push('\n');
    for r in rows {
        let s = &r.summary;
        let fields = [
            r.sweep_var.to_string(),
            num(r.sweep_value),
            r.scheme.to_string(),
            s.trials.to_string(),
            num(s.avg_secrecy_rate),
            num(r.normalized),
            num(s.sop),
            num(s.infeasible_fraction),
            num(s.mean_iterations),
            r.seed.to_string(),
            r.variant.ns.to_string(),
            r.variant.nr.to_string(),
            r.variant.m.to_string(),
            num(s.secrecy_rate_stderr),
            num(s.avg_h1),
            num(s.avg_h2),
            num(s.relative_error.unwrap_or(f64::NAN)),
        ];
        let _ = writeln!(out, "{}", fields.join(","));
    }
    out
}

pub fn write_csv(rows: &[Row], path: &Path) -> Result<()> {
    fs::write(path, render_csv(rows)).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Runs `exp` and writes its CSV to `exp.output`. Nothing is written if
/// validation or any trial fails.
pub fn run_to_file(exp: &Experiment) -> Result<Vec<Row>> {
    let rows = run_experiment(exp)?;
    write_csv(&rows, &exp.output)?;
    Ok(rows)
}
