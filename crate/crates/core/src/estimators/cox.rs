//! Cox partial likelihood for counting-process data with two binary time-varying covariates.

use super::newton::Objective;
use super::{class_covariates, fit_strata, CountingProcessRow, FitResult, Stratum, N_CLASSES};
use crate::error::EstimationError;
use crate::sim::Day;

/// Approximation of the partial likelihood at tied event times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieMethod {
    #[default]
    Efron,
    Breslow,
}

/// Risk-set and event counts by exposure class at each distinct event time.
fn risk_table(rows: &[CountingProcessRow]) -> Vec<Stratum> {
    let mut times: Vec<Day> = rows.iter().filter(|r| r.event).map(|r| r.stop).collect();
    times.sort_unstable();
    times.dedup();
    if times.is_empty() {
        return Vec::new();
    }

    // Difference array over event-time indices, one column per class.
    let mut delta = vec![[0i64; N_CLASSES]; times.len() + 1];
    let mut strata = vec![Stratum::default(); times.len()];
    for row in rows {
        // At risk at time t iff start < t <= stop.
        let first = times.partition_point(|&t| t <= row.start);
        let last = times.partition_point(|&t| t <= row.stop);
        if first < last {
            let class = row.class();
            delta[first][class] += 1;
            delta[last][class] -= 1;
        }
        if row.event {
            let idx = last - 1;
            strata[idx].events[row.class()] += 1.0;
        }
    }
    let mut running = [0i64; N_CLASSES];
    for (stratum, d) in strata.iter_mut().zip(&delta) {
        for c in 0..N_CLASSES {
            running[c] += d[c];
            stratum.weight[c] = running[c] as f64;
        }
    }
    strata
}

struct PartialLikelihood {
    strata: Vec<Stratum>,
    active: Vec<usize>,
    ties: TieMethod,
}

impl Objective for PartialLikelihood {
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
            let d = stratum.total_events();
            if d == 0.0 {
                continue;
            }
            // Risk-set and tied-event sums of w, w z, w z z'.
            let mut s0 = 0.0;
            let mut s1 = [0.0; 2];
            let mut s2 = [[0.0; 2]; 2];
            let mut t0 = 0.0;
            let mut t1 = [0.0; 2];
            let mut t2 = [[0.0; 2]; 2];
            for c in 0..N_CLASSES {
                let rw = stratum.weight[c] * w[c];
                let ew = stratum.events[c] * w[c];
                s0 += rw;
                t0 += ew;
                ll += stratum.events[c] * eta[c];
                for i in 0..2 {
                    s1[i] += rw * z[c][i];
                    t1[i] += ew * z[c][i];
                    for j in 0..2 {
                        s2[i][j] += rw * z[c][i] * z[c][j];
                        t2[i][j] += ew * z[c][i] * z[c][j];
                    }
                    score_add(score, &self.active, i, stratum.events[c] * z[c][i]);
                }
            }
            let n_ties = d.round() as usize;
            for m in 0..n_ties {
                let a = match self.ties {
                    TieMethod::Efron => m as f64 / d,
                    TieMethod::Breslow => 0.0,
                };
                let d0 = s0 - a * t0;
                let d1 = [s1[0] - a * t1[0], s1[1] - a * t1[1]];
                ll -= d0.ln();
                for (slot_i, &i) in self.active.iter().enumerate() {
                    score[slot_i] -= d1[i] / d0;
                    for (slot_j, &j) in self.active.iter().enumerate() {
                        let d2 = s2[i][j] - a * t2[i][j];
                        information[slot_i * p + slot_j] += d2 / d0 - d1[i] * d1[j] / (d0 * d0);
                    }
                }
            }
        }
        ll
    }
}

fn score_add(score: &mut [f64], active: &[usize], k: usize, value: f64) {
    if let Some(slot) = active.iter().position(|&a| a == k) {
        score[slot] += value;
    }
}

/// Maximises the Cox partial likelihood over the dose-1 and dose-2 coefficients.
///
/// Coefficients without any exposure contrast at an event time are reported as
/// unidentifiable, and coefficients whose estimate diverges (no exposed events, or no
/// unexposed ones) as separated; both are left out of the fit.
pub fn fit_cox(rows: &[CountingProcessRow], ties: TieMethod) -> Result<FitResult, EstimationError> {
    let strata = risk_table(rows);
    if strata.is_empty() {
        return Err(EstimationError::NoEvents);
    }
    Ok(fit_strata(strata, |strata, active| PartialLikelihood {
        strata,
        active,
        ties,
    }))
}
