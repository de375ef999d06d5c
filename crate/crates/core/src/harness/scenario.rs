use std::fmt;

use rayon::prelude::*;

use super::seed::{replication_seed, stream_rng, stream_seed, Stream};
use super::summary::{summarize_cell, CellSummary};
use crate::error::{Error, Result};
use crate::estimators::{
    build_counting_process, build_sccs_cases, fit_cox, fit_sccs, Coefficient, FitIssue, FitResult,
    Limit, TieMethod,
};
use crate::linkage::ErrorSpec;
use crate::sim::{simulate_cohort, Cohort, SimConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Cox,
    Sccs,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Cox, Method::Sccs];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Cox => "cox",
            Method::Sccs => "sccs",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One cell of the scenario grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    /// Position in the grid; part of every replication seed.
    pub id: usize,
    pub errors: ErrorSpec,
    pub replications: usize,
    pub alpha: f64,
    pub master_seed: u64,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        ErrorSpec::new(self.errors.p_missing_match, self.errors.p_false_match)?;
        if self.replications == 0 {
            return Err(Error::InvalidConfig(
                "replications must be at least 1".into(),
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Outcome of one fitted coefficient in one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationResult {
    pub scenario_id: usize,
    pub p_missing_match: f64,
    pub p_false_match: f64,
    pub replication: usize,
    pub method: Method,
    pub dose: u8,
    /// Ratio-scale estimate (hazard ratio or relative incidence).
    pub estimate: f64,
    pub se_log: f64,
    pub p_value: f64,
    pub converged: bool,
    pub iterations: usize,
    pub issue: Option<String>,
}

/// Cohort state at each stage of one replication, for inspection and testing.
#[derive(Debug, Clone)]
pub struct ReplicationData {
    pub raw: Cohort,
    pub perturbed: Cohort,
    pub cox: std::result::Result<FitResult, crate::EstimationError>,
    pub sccs: std::result::Result<FitResult, crate::EstimationError>,
}

/// Simulates, perturbs and analyses one replication, keeping the intermediate cohorts.
pub fn replicate(
    config: &SimConfig,
    scenario: &ScenarioSpec,
    replication: usize,
    ties: TieMethod,
) -> Result<ReplicationData> {
    let seed = replication_seed(scenario.master_seed, scenario.id as u64, replication as u64);
    let raw = simulate_cohort(config, stream_seed(seed, Stream::Cohort))?;
    let mut perturbed = raw.clone();
    scenario
        .errors
        .apply(&mut perturbed, &mut stream_rng(seed, Stream::Linkage));
    let cox = fit_cox(&build_counting_process(&perturbed), ties);
    let sccs = fit_sccs(&build_sccs_cases(&perturbed));
    Ok(ReplicationData {
        raw,
        perturbed,
        cox,
        sccs,
    })
}

fn run_one(
    config: &SimConfig,
    scenario: &ScenarioSpec,
    replication: usize,
    ties: TieMethod,
) -> Result<Vec<ReplicationResult>> {
    let seed = replication_seed(scenario.master_seed, scenario.id as u64, replication as u64);
    let mut cohort = simulate_cohort(config, stream_seed(seed, Stream::Cohort))?;
    scenario
        .errors
        .apply(&mut cohort, &mut stream_rng(seed, Stream::Linkage));
    let cox = fit_cox(&build_counting_process(&cohort), ties);
    let sccs = fit_sccs(&build_sccs_cases(&cohort));
    drop(cohort);

    let mut out = Vec::with_capacity(4);
    for (method, fit) in [(Method::Cox, cox), (Method::Sccs, sccs)] {
        for dose in [1u8, 2] {
            let base = ReplicationResult {
                scenario_id: scenario.id,
                p_missing_match: scenario.errors.p_missing_match,
                p_false_match: scenario.errors.p_false_match,
                replication,
                method,
                dose,
                estimate: f64::NAN,
                se_log: f64::NAN,
                p_value: f64::NAN,
                converged: false,
                iterations: 0,
                issue: None,
            };
            let record = match &fit {
                Ok(fit) => match fit.dose(usize::from(dose)) {
                    Coefficient::Estimated(est) => ReplicationResult {
                        estimate: est.ratio(),
                        se_log: est.se,
                        p_value: est.p_value,
                        converged: fit.converged,
                        iterations: fit.iterations,
                        issue: fit.issue.map(issue_label),
                        ..base
                    },
                    Coefficient::Unidentifiable => ReplicationResult {
                        iterations: fit.iterations,
                        issue: Some("unidentifiable".into()),
                        ..base
                    },
                    // No events in this exposure's risk time: the ratio-scale MLE is 0
                    // and the Wald test cannot reject.
                    Coefficient::Separated(Limit::Zero) => ReplicationResult {
                        estimate: 0.0,
                        se_log: f64::INFINITY,
                        p_value: 1.0,
                        converged: fit.converged,
                        iterations: fit.iterations,
                        issue: Some("estimate_at_zero".into()),
                        ..base
                    },
                    Coefficient::Separated(Limit::Infinite) => ReplicationResult {
                        iterations: fit.iterations,
                        issue: Some("separation".into()),
                        ..base
                    },
                },
                Err(err) => ReplicationResult {
                    issue: Some(err.to_string()),
                    ..base
                },
            };
            out.push(record);
        }
    }
    Ok(out)
}

fn issue_label(issue: FitIssue) -> String {
    match issue {
        FitIssue::Separation => "separation",
        FitIssue::MaxIterations => "max_iterations",
        FitIssue::SingularInformation => "singular_information",
        FitIssue::Stalled => "stalled",
    }
    .to_string()
}

/// Runs every replication of a scenario on the current rayon pool.
///
/// Results come back ordered by replication, then method (Cox first), then dose, whatever the
/// pool width. Estimator failures are recorded as non-converged rows.
pub fn run_scenario(
    config: &SimConfig,
    scenario: &ScenarioSpec,
    ties: TieMethod,
) -> Result<Vec<ReplicationResult>> {
    config.validate()?;
    scenario.validate()?;
    let per_rep: Vec<Vec<ReplicationResult>> = (0..scenario.replications)
        .into_par_iter()
        .map(|rep| run_one(config, scenario, rep, ties))
        .collect::<Result<_>>()?;
    Ok(per_rep.into_iter().flatten().collect())
}

/// Summary of one (scenario, method, dose) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSummary {
    pub scenario_id: usize,
    pub p_missing_match: f64,
    pub p_false_match: f64,
    pub method: Method,
    pub dose: u8,
    pub cell: CellSummary,
}

/// Groups replication results by (scenario, method, dose) and summarises each cell.
/// Cells with fewer than two converged fits get undefined (NaN) metrics.
pub fn summarize(results: &[ReplicationResult], true_rr: f64, alpha: f64) -> Vec<ScenarioSummary> {
    let mut keys: Vec<(usize, Method, u8)> = results
        .iter()
        .map(|r| (r.scenario_id, r.method, r.dose))
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(scenario_id, method, dose)| {
            let cell: Vec<&ReplicationResult> = results
                .iter()
                .filter(|r| r.scenario_id == scenario_id && r.method == method && r.dose == dose)
                .collect();
            let converged: Vec<&&ReplicationResult> = cell.iter().filter(|r| r.converged).collect();
            let estimates: Vec<f64> = converged.iter().map(|r| r.estimate).collect();
            let p_values: Vec<f64> = converged.iter().map(|r| r.p_value).collect();
            let n_failed = cell.len() - converged.len();
            let summary = summarize_cell(&estimates, &p_values, n_failed, true_rr, alpha)
                .unwrap_or_else(|_| CellSummary::undefined(converged.len(), n_failed));
            ScenarioSummary {
                scenario_id,
                p_missing_match: cell[0].p_missing_match,
                p_false_match: cell[0].p_false_match,
                method,
                dose,
                cell: summary,
            }
        })
        .collect()
}
