//! CSV result files. Undefined values (NaN) are written as empty fields.

use std::io::Write;

use super::scenario::{ReplicationResult, ScenarioSummary};
use crate::error::Result;

pub const REPLICATION_COLUMNS: [&str; 12] = [
    "scenario_id",
    "pct_missing",
    "pct_false",
    "replication",
    "method",
    "dose",
    "estimate",
    "se_log",
    "p_value",
    "converged",
    "iterations",
    "issue",
];

pub const SUMMARY_COLUMNS: [&str; 16] = [
    "scenario_id",
    "pct_missing",
    "pct_false",
    "method",
    "dose",
    "n_converged",
    "bias",
    "se_bias",
    "bias_ci_low",
    "bias_ci_high",
    "mse",
    "se_mse",
    "power",
    "power_ci_low",
    "power_ci_high",
    "n_failed",
];

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        String::new()
    }
}

/// Proportion as a percentage, rounded to 1e-9 to hide binary noise (0.3 -> "30").
fn pct(p: f64) -> String {
    num((p * 100.0 * 1e9).round() / 1e9)
}

pub fn write_replications<W: Write>(out: W, results: &[ReplicationResult]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(REPLICATION_COLUMNS)?;
    for r in results {
        writer.write_record([
            r.scenario_id.to_string(),
            pct(r.p_missing_match),
            pct(r.p_false_match),
            r.replication.to_string(),
            r.method.to_string(),
            r.dose.to_string(),
            num(r.estimate),
            num(r.se_log),
            num(r.p_value),
            r.converged.to_string(),
            r.iterations.to_string(),
            r.issue.clone().unwrap_or_default(),
        ])?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_summary<W: Write>(out: W, summaries: &[ScenarioSummary]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(SUMMARY_COLUMNS)?;
    for s in summaries {
        let c = &s.cell;
        writer.write_record([
            s.scenario_id.to_string(),
            pct(s.p_missing_match),
            pct(s.p_false_match),
            s.method.to_string(),
            s.dose.to_string(),
            c.n_converged.to_string(),
            num(c.bias),
            num(c.se_bias),
            num(c.bias_ci.0),
            num(c.bias_ci.1),
            num(c.mse),
            num(c.se_mse),
            num(c.power),
            num(c.power_ci.0),
            num(c.power_ci.1),
            c.n_failed.to_string(),
        ])?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}
