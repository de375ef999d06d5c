//! Self-controlled case series.
//!
//! Conditional on a case's total number of events, the events are multinomial over the
//! case's observation intervals with probabilities proportional to
//! `length * exp(beta . exposure)`. The baseline rate cancels, so only cases whose
//! observation time mixes exposure classes carry information.

use super::newton::Objective;
use super::{class_covariates, fit_strata, FitResult, Stratum, N_CLASSES};
use crate::error::EstimationError;
use crate::sim::{Cohort, Day, Dose};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exposure {
    Baseline,
    /// Risk window after dose 1.
    Risk1,
    /// Risk window after dose 2.
    Risk2,
}

impl Exposure {
    fn class(self) -> usize {
        match self {
            Exposure::Baseline => 0,
            Exposure::Risk1 => 1,
            Exposure::Risk2 => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SccsInterval {
    pub length: u32,
    pub exposure: Exposure,
    pub events: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccsCase {
    pub case_id: u32,
    pub intervals: Vec<SccsInterval>,
    pub observation_length: u32,
}

impl SccsCase {
    pub fn total_events(&self) -> u32 {
        self.intervals.iter().map(|i| i.events).sum()
    }

    fn stratum(&self) -> Stratum {
        let mut stratum = Stratum::default();
        for interval in &self.intervals {
            let c = interval.exposure.class();
            stratum.weight[c] += f64::from(interval.length);
            stratum.events[c] += f64::from(interval.events);
        }
        stratum
    }
}

/// One case per person with at least one event, observed over days `1..=n_days`, with the
/// closed mRNA risk windows cut out as `Risk1` / `Risk2` intervals. Where the two windows
/// overlap the day counts towards dose 2. All events, recurrences included, are kept.
pub fn build_sccs_cases(cohort: &Cohort) -> Vec<SccsCase> {
    let config = &cohort.config;
    let n_days = config.n_days;
    cohort
        .individuals
        .iter()
        .filter(|ind| !ind.event_days.is_empty())
        .map(|ind| {
            let window = |dose| {
                ind.vaccination
                    .as_ref()
                    .and_then(|rec| rec.risk_window(dose, config.d_risk))
                    .filter(|&(lo, _)| lo <= n_days)
                    .map(|(lo, hi)| (lo, hi.min(n_days)))
            };
            let w1 = window(Dose::First);
            let w2 = window(Dose::Second);
            let label = |day: Day| {
                let inside =
                    |w: Option<(Day, Day)>| w.is_some_and(|(lo, hi)| lo <= day && day <= hi);
                if inside(w2) {
                    Exposure::Risk2
                } else if inside(w1) {
                    Exposure::Risk1
                } else {
                    Exposure::Baseline
                }
            };

            // Candidate interval starts: day 1 and the day after each window boundary.
            let mut starts: Vec<Day> = vec![1];
            for (lo, hi) in [w1, w2].into_iter().flatten() {
                starts.extend([lo, hi + 1].into_iter().filter(|&d| d > 1 && d <= n_days));
            }
            starts.sort_unstable();
            starts.dedup();

            let mut intervals: Vec<(Day, Day, Exposure)> = Vec::with_capacity(starts.len());
            for (i, &start) in starts.iter().enumerate() {
                let end = starts.get(i + 1).map_or(n_days, |&next| next - 1);
                let exposure = label(start);
                match intervals.last_mut() {
                    Some(last) if last.2 == exposure => last.1 = end,
                    _ => intervals.push((start, end, exposure)),
                }
            }

            let intervals = intervals
                .into_iter()
                .map(|(start, end, exposure)| SccsInterval {
                    length: end - start + 1,
                    exposure,
                    events: ind
                        .event_days
                        .iter()
                        .filter(|&&d| start <= d && d <= end)
                        .count() as u32,
                })
                .collect();
            SccsCase {
                case_id: ind.id,
                intervals,
                observation_length: n_days,
            }
        })
        .collect()
}

struct ConditionalLikelihood {
    strata: Vec<Stratum>,
    active: Vec<usize>,
}

impl Objective for ConditionalLikelihood {
    fn dim(&self) -> usize {
        self.active.len()
    }

    fn evaluate(&self, beta: &[f64], score: &mut [f64], information: &mut [f64]) -> f64 {
        let p = self.active.len();
        let mut full = [0.0; 2];
        for (slot, &k) in self.active.iter().enumerate() {
            full[k] = beta[slot];
        }
        let z: [[f64; 2]; N_CLASSES] = std::array::from_fn(class_covariates);
        let eta: [f64; N_CLASSES] = std::array::from_fn(|c| full[0] * z[c][0] + full[1] * z[c][1]);
        let w: [f64; N_CLASSES] = eta.map(f64::exp);

        score.iter_mut().for_each(|s| *s = 0.0);
        information.iter_mut().for_each(|v| *v = 0.0);
        let mut ll = 0.0;
        for stratum in &self.strata {
            let n = stratum.total_events();
            let mut s0 = 0.0;
            let mut s1 = [0.0; 2];
            let mut s2 = [[0.0; 2]; 2];
            let mut observed = [0.0; 2];
            for c in 0..N_CLASSES {
                let length = stratum.weight[c];
                if length <= 0.0 {
                    continue;
                }
                let events = stratum.events[c];
                ll += events * (eta[c] + length.ln());
                let lw = length * w[c];
                s0 += lw;
                for i in 0..2 {
                    observed[i] += events * z[c][i];
                    s1[i] += lw * z[c][i];
                    for j in 0..2 {
                        s2[i][j] += lw * z[c][i] * z[c][j];
                    }
                }
            }
            ll -= n * s0.ln();
            for (slot_i, &i) in self.active.iter().enumerate() {
                score[slot_i] += observed[i] - n * s1[i] / s0;
                for (slot_j, &j) in self.active.iter().enumerate() {
                    information[slot_i * p + slot_j] +=
                        n * (s2[i][j] / s0 - s1[i] * s1[j] / (s0 * s0));
                }
            }
        }
        ll
    }
}

/// Maximises the SCCS conditional likelihood over the dose-1 and dose-2 relative incidences.
pub fn fit_sccs(cases: &[SccsCase]) -> Result<FitResult, EstimationError> {
    let strata: Vec<Stratum> = cases
        .iter()
        .map(SccsCase::stratum)
        .filter(|s| s.total_events() > 0.0 && s.weight.iter().filter(|&&w| w > 0.0).count() > 1)
        .collect();
    if strata.is_empty() {
        return Err(EstimationError::NoInformativeCases);
    }
    Ok(fit_strata(strata, |strata, active| ConditionalLikelihood {
        strata,
        active,
    }))
}
