//! Shared fixtures for the integration tests and the acceptance runner: brute-force
//! likelihood oracles, random small instances and the property checks.

#![allow(dead_code)]

use std::collections::HashMap;

use linksim::estimators::{
    build_counting_process, build_sccs_cases, fit_cox, fit_sccs, Coefficient, CountingProcessRow,
    Exposure, FitResult, SccsCase, SccsInterval, TieMethod,
};
use linksim::harness::summarize_cell;
use linksim::linkage::{inject_false_matches, inject_missing_matches, missing_match_count};
use linksim::sim::{
    simulate_cohort, simulate_cohort_daily, Cohort, Day, FirstDoseCurve, SimConfig,
    VaccinationRecord, VaccineType, VaccineTypeDist,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------------------
// Likelihood oracles, written directly from the rows / intervals.

/// Cox partial log-likelihood from raw counting-process rows.
pub fn cox_loglik(rows: &[CountingProcessRow], beta: [f64; 2], ties: TieMethod) -> f64 {
    let eta = |r: &CountingProcessRow| {
        beta[0] * f64::from(u8::from(r.x1)) + beta[1] * f64::from(u8::from(r.x2))
    };
    let mut times: Vec<Day> = rows.iter().filter(|r| r.event).map(|r| r.stop).collect();
    times.sort_unstable();
    times.dedup();
    let mut ll = 0.0;
    for t in times {
        let mut risk = 0.0;
        let mut tied = 0.0;
        let mut d = 0usize;
        for r in rows {
            if r.start < t && t <= r.stop {
                risk += eta(r).exp();
            }
            if r.event && r.stop == t {
                ll += eta(r);
                tied += eta(r).exp();
                d += 1;
            }
        }
        match ties {
            TieMethod::Breslow => ll -= d as f64 * risk.ln(),
            TieMethod::Efron => {
                for m in 0..d {
                    ll -= (risk - m as f64 / d as f64 * tied).ln();
                }
            }
        }
    }
    ll
}

/// Conditional Poisson (SCCS) log-likelihood from raw intervals.
pub fn sccs_loglik(cases: &[SccsCase], beta: [f64; 2]) -> f64 {
    let eta = |e: Exposure| match e {
        Exposure::Baseline => 0.0,
        Exposure::Risk1 => beta[0],
        Exposure::Risk2 => beta[1],
    };
    let mut ll = 0.0;
    for case in cases {
        let mut denom = 0.0;
        let mut n = 0.0;
        for iv in &case.intervals {
            let len = f64::from(iv.length);
            denom += len * eta(iv.exposure).exp();
            if iv.events > 0 {
                ll += f64::from(iv.events) * (eta(iv.exposure) + len.ln());
            }
            n += f64::from(iv.events);
        }
        ll -= n * denom.ln();
    }
    ll
}

const GRID_LIMIT: f64 = 5.0;
const INTERIOR_MARGIN: f64 = 0.5;

fn grid_argmax(f: &dyn Fn([f64; 2]) -> f64, center: [f64; 2], half: f64, step: f64) -> [f64; 2] {
    let n = (2.0 * half / step).round() as i64;
    let mut best = (f64::NEG_INFINITY, center);
    for i in 0..=n {
        for j in 0..=n {
            let b = [
                center[0] - half + i as f64 * step,
                center[1] - half + j as f64 * step,
            ];
            let v = f(b);
            if v > best.0 {
                best = (v, b);
            }
        }
    }
    best.1
}

/// Maximises `f` over `[-5, 5]^2`: a 0.05 grid, a 0.001 grid around its best point, a
/// 0.0001 grid around that, then compass polishing. `None` when the coarse optimum sits
/// within 0.5 of the boundary (no interior maximum to compare against).
pub fn grid_maximize(f: &dyn Fn([f64; 2]) -> f64) -> Option<[f64; 2]> {
    let coarse = grid_argmax(f, [0.0, 0.0], GRID_LIMIT, 0.05);
    if coarse
        .iter()
        .any(|b| b.abs() > GRID_LIMIT - INTERIOR_MARGIN)
    {
        return None;
    }
    let medium = grid_argmax(f, coarse, 0.1, 1e-3);
    let mut x = grid_argmax(f, medium, 5e-3, 1e-4);
    let mut fx = f(x);
    let mut step = 1e-4;
    let dirs = [
        [1.0, 0.0],
        [-1.0, 0.0],
        [0.0, 1.0],
        [0.0, -1.0],
        [1.0, 1.0],
        [-1.0, -1.0],
        [1.0, -1.0],
        [-1.0, 1.0],
    ];
    while step > 1e-10 {
        let mut moved = false;
        for d in dirs {
            let y = [x[0] + step * d[0], x[1] + step * d[1]];
            let fy = f(y);
            if fy > fx {
                (x, fx, moved) = (y, fy, true);
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    Some(x)
}

// ---------------------------------------------------------------------------------------
// Random small instances.

/// Up to eight subjects on a short integer time axis, so tied event times are common.
pub fn random_cox_rows(seed: u64) -> Vec<CountingProcessRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(4..=8u32);
    let mut rows = Vec::new();
    for subject in 0..n {
        let end: Day = rng.random_range(3..=14);
        let event = rng.random_bool(0.8);
        let window = |rng: &mut ChaCha8Rng| {
            let a: Day = rng.random_range(0..end);
            let b: Day = rng.random_range(a + 1..=end.min(a + 6));
            (a, b)
        };
        let w1 = rng.random_bool(0.7).then(|| window(&mut rng));
        let w2 = (w1.is_some() && rng.random_bool(0.6)).then(|| window(&mut rng));
        let mut cuts = vec![0, end];
        for (a, b) in w1.into_iter().chain(w2) {
            cuts.extend([a, b]);
        }
        cuts.sort_unstable();
        cuts.dedup();
        let inside =
            |w: Option<(Day, Day)>, lo: Day, hi: Day| w.is_some_and(|(a, b)| a <= lo && hi <= b);
        for pair in cuts.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            rows.push(CountingProcessRow {
                subject,
                start: lo,
                stop: hi,
                event: event && hi == end,
                x1: inside(w1, lo, hi),
                x2: inside(w2, lo, hi),
            });
        }
    }
    rows
}

/// Two to eight cases with a baseline (sometimes split in two), an optional risk-1 and an
/// optional risk-2 interval, and one to six events.
pub fn random_sccs_cases(seed: u64) -> Vec<SccsCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=8u32);
    let mut cases = Vec::new();
    for case_id in 0..n {
        let mut intervals = vec![SccsInterval {
            length: rng.random_range(20..=200),
            exposure: Exposure::Baseline,
            events: 0,
        }];
        if rng.random_bool(0.3) {
            intervals.push(SccsInterval {
                length: rng.random_range(5..=100),
                exposure: Exposure::Baseline,
                events: 0,
            });
        }
        if rng.random_bool(0.85) {
            intervals.push(SccsInterval {
                length: rng.random_range(5..=30),
                exposure: Exposure::Risk1,
                events: 0,
            });
        }
        if rng.random_bool(0.7) {
            intervals.push(SccsInterval {
                length: rng.random_range(5..=30),
                exposure: Exposure::Risk2,
                events: 0,
            });
        }
        let total = rng.random_range(1..=6);
        let weights: Vec<f64> = intervals
            .iter()
            .map(|iv| {
                let boost = if iv.exposure == Exposure::Baseline {
                    1.0
                } else {
                    4.0
                };
                f64::from(iv.length) * boost
            })
            .collect();
        let sum: f64 = weights.iter().sum();
        for _ in 0..total {
            let mut u = rng.random::<f64>() * sum;
            let mut k = 0;
            while k + 1 < weights.len() && u >= weights[k] {
                u -= weights[k];
                k += 1;
            }
            intervals[k].events += 1;
        }
        let observation_length = intervals.iter().map(|iv| iv.length).sum();
        cases.push(SccsCase {
            case_id,
            intervals,
            observation_length,
        });
    }
    cases
}

fn estimates(fit: &FitResult) -> Option<[f64; 2]> {
    if !fit.converged {
        return None;
    }
    match fit.coefficients {
        [Coefficient::Estimated(a), Coefficient::Estimated(b)] => {
            Some([a.log_effect, b.log_effect])
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------------------
// Oracle suites.

#[derive(Debug, Default)]
pub struct OracleReport {
    pub compared: usize,
    pub skipped: usize,
    pub worst: f64,
    pub failures: Vec<String>,
}

impl OracleReport {
    pub fn passed(&self, needed: usize) -> bool {
        self.compared >= needed && self.failures.is_empty()
    }

    fn compare(&mut self, seed: u64, fitted: Option<[f64; 2]>, oracle: [f64; 2]) {
        self.compared += 1;
        match fitted {
            Some(b) => {
                let diff = (b[0] - oracle[0]).abs().max((b[1] - oracle[1]).abs());
                self.worst = self.worst.max(diff);
                if diff > 1e-4 {
                    self.failures
                        .push(format!("seed {seed}: fitted {b:?}, grid {oracle:?}"));
                }
            }
            None => self.failures.push(format!(
                "seed {seed}: no converged fit, grid optimum {oracle:?}"
            )),
        }
    }
}

/// Compares the Cox fitter with grid search until `needed` instances with an interior
/// optimum have been checked.
pub fn cox_oracle_suite(ties: TieMethod, needed: usize) -> OracleReport {
    let mut report = OracleReport::default();
    let mut seed = 0u64;
    while report.compared < needed && seed < 10_000 {
        let rows = random_cox_rows(seed);
        match grid_maximize(&|b| cox_loglik(&rows, b, ties)) {
            Some(oracle) => {
                let fitted = fit_cox(&rows, ties).ok().as_ref().and_then(estimates);
                report.compare(seed, fitted, oracle);
            }
            None => report.skipped += 1,
        }
        seed += 1;
    }
    report
}

pub fn sccs_oracle_suite(needed: usize) -> OracleReport {
    let mut report = OracleReport::default();
    let mut seed = 1_000_000u64;
    while report.compared < needed && seed < 1_010_000 {
        let cases = random_sccs_cases(seed);
        match grid_maximize(&|b| sccs_loglik(&cases, b)) {
            Some(oracle) => {
                let fitted = fit_sccs(&cases).ok().as_ref().and_then(estimates);
                report.compare(seed, fitted, oracle);
            }
            None => report.skipped += 1,
        }
        seed += 1;
    }
    report
}

/// Two cases sharing a 22/528 partition, one event each; the relative incidence is 528/22.
pub fn closed_form_cases() -> Vec<SccsCase> {
    let case = |case_id, risk_events, base_events| SccsCase {
        case_id,
        intervals: vec![
            SccsInterval {
                length: 22,
                exposure: Exposure::Risk1,
                events: risk_events,
            },
            SccsInterval {
                length: 528,
                exposure: Exposure::Baseline,
                events: base_events,
            },
        ],
        observation_length: 550,
    };
    vec![case(0, 1, 0), case(1, 0, 1)]
}

// ---------------------------------------------------------------------------------------
// Small simulator configurations.

pub fn small_config(
    n_sim: u32,
    n_days: Day,
    campaign_start_day: Day,
    curve_p: f64,
    p_event_year: f64,
) -> SimConfig {
    SimConfig {
        n_sim,
        n_days,
        campaign_start_day,
        first_dose_curve: FirstDoseCurve::constant(
            (n_days + 1 - campaign_start_day) as usize,
            curve_p,
        )
        .unwrap(),
        p_event_year,
        ..SimConfig::table1()
    }
}

prop_compose! {
    pub fn arb_config()(
        n_sim in 1u32..120,
        n_days in 20u32..160,
        start_frac in 0.0f64..1.0,
        d_risk in 0u32..25,
        d_immune in 0u32..50,
        rr_vacc in 0.5f64..5.0,
        p_event_year in 0.05f64..0.95,
        curve_p in 0.0f64..0.3,
        weights in prop::array::uniform4(0.0f64..1.0),
    ) -> SimConfig {
        let start = 1 + ((n_days - 1) as f64 * start_frac) as u32;
        let weights = if weights.iter().sum::<f64>() > 0.0 { weights } else { [1.0, 0.0, 0.0, 0.0] };
        SimConfig {
            d_risk,
            d_immune,
            rr_vacc,
            vaccine_type_dist: VaccineTypeDist::from_weights(weights).unwrap(),
            ..small_config(n_sim, n_days, start, curve_p, p_event_year)
        }
    }
}

type Generator = fn(&SimConfig, u64) -> linksim::Result<Cohort>;

fn generators() -> [(&'static str, Generator); 2] {
    [("fast", simulate_cohort), ("daily", simulate_cohort_daily)]
}

// ---------------------------------------------------------------------------------------
// Properties. Each runs `cases` deterministic proptest cases and reports the first
// minimal counterexample.

pub type Property = fn(u32) -> Result<(), String>;

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub const PROPERTIES: [(&str, Property); 11] = [
    ("determinism", determinism),
    ("immunity", immunity),
    ("dose_spacing", dose_spacing),
    ("counting_process_partition", counting_process_partition),
    ("sccs_partition", sccs_partition),
    ("false_match_conservation", false_match_conservation),
    ("missing_match_removal", missing_match_removal),
    ("cox_exposure_swap_negates", cox_exposure_swap_negates),
    (
        "cox_time_transform_invariance",
        cox_time_transform_invariance,
    ),
    ("sccs_length_scaling", sccs_length_scaling),
    ("mse_at_least_squared_bias", mse_at_least_squared_bias),
];

pub fn determinism(cases: u32) -> Result<(), String> {
    run(cases, (arb_config(), any::<u64>()), |(config, seed)| {
        for (name, simulate) in generators() {
            let a = simulate(&config, seed).unwrap();
            let b = simulate(&config, seed).unwrap();
            prop_assert_eq!(&a, &b, "{} generator", name);
            prop_assert_eq!(a.fingerprint(), b.fingerprint());
        }
        Ok(())
    })
}

pub fn immunity(cases: u32) -> Result<(), String> {
    run(cases, (arb_config(), any::<u64>()), |(config, seed)| {
        for (name, simulate) in generators() {
            let cohort = simulate(&config, seed).unwrap();
            for ind in &cohort.individuals {
                for pair in ind.event_days.windows(2) {
                    prop_assert!(
                        pair[1] > pair[0] + config.d_immune,
                        "{} generator: events {:?} with d_immune {}",
                        name,
                        ind.event_days,
                        config.d_immune
                    );
                }
                prop_assert!(ind
                    .event_days
                    .iter()
                    .all(|&d| (1..=config.n_days).contains(&d)));
            }
        }
        Ok(())
    })
}

pub fn dose_spacing(cases: u32) -> Result<(), String> {
    run(cases, (arb_config(), any::<u64>()), |(config, seed)| {
        for (name, simulate) in generators() {
            let cohort = simulate(&config, seed).unwrap();
            for rec in cohort.individuals.iter().filter_map(|i| i.vaccination) {
                prop_assert!(rec.dose1_day >= config.campaign_start_day, "{}", name);
                prop_assert!(rec.dose1_day <= config.n_days);
                let gap = match rec.vaccine_type {
                    VaccineType::BionTech | VaccineType::Moderna => {
                        Some(config.second_dose_gap_mrna)
                    }
                    VaccineType::AstraZeneca => Some(config.second_dose_gap_az),
                    VaccineType::Janssen => None,
                };
                let expected = gap
                    .map(|g| rec.dose1_day + g)
                    .filter(|&d| d <= config.n_days);
                prop_assert_eq!(rec.dose2_day, expected, "{} generator", name);
            }
        }
        Ok(())
    })
}

pub fn counting_process_partition(cases: u32) -> Result<(), String> {
    run(cases, (arb_config(), any::<u64>()), |(config, seed)| {
        let cohort = simulate_cohort(&config, seed).unwrap();
        let rows = build_counting_process(&cohort);
        let mut by_subject: HashMap<u32, Vec<&CountingProcessRow>> = HashMap::new();
        for r in &rows {
            prop_assert!(r.start < r.stop);
            by_subject.entry(r.subject).or_default().push(r);
        }
        prop_assert_eq!(by_subject.len(), cohort.individuals.len());
        for ind in &cohort.individuals {
            let rows = &by_subject[&ind.id];
            let end = ind.first_event().unwrap_or(config.n_days);
            prop_assert_eq!(rows[0].start, 0);
            prop_assert_eq!(rows.last().unwrap().stop, end);
            prop_assert!(rows.windows(2).all(|w| w[0].stop == w[1].start));
            let total: u32 = rows.iter().map(|r| r.stop - r.start).sum();
            prop_assert_eq!(total, end);
            let events: Vec<_> = rows.iter().filter(|r| r.event).collect();
            prop_assert_eq!(events.len(), usize::from(ind.first_event().is_some()));
            if let Some(e) = events.first() {
                prop_assert_eq!(e.stop, end);
                let rec = ind.vaccination;
                let d = config.d_risk;
                let in1 = rec.is_some_and(|r| r.in_dose_window(linksim::sim::Dose::First, end, d));
                let in2 = rec.is_some_and(|r| r.in_dose_window(linksim::sim::Dose::Second, end, d));
                prop_assert_eq!((e.x1, e.x2), (in1, in2));
            }
        }
        Ok(())
    })
}

pub fn sccs_partition(cases: u32) -> Result<(), String> {
    run(cases, (arb_config(), any::<u64>()), |(config, seed)| {
        let cohort = simulate_cohort(&config, seed).unwrap();
        let cases = build_sccs_cases(&cohort);
        let n_cases = cohort
            .individuals
            .iter()
            .filter(|i| !i.event_days.is_empty())
            .count();
        prop_assert_eq!(cases.len(), n_cases);
        for case in &cases {
            let ind = &cohort.individuals[case.case_id as usize];
            prop_assert_eq!(case.observation_length, config.n_days);
            prop_assert!(case.intervals.iter().all(|iv| iv.length >= 1));
            let total: u32 = case.intervals.iter().map(|iv| iv.length).sum();
            prop_assert_eq!(total, config.n_days);
            prop_assert_eq!(case.total_events() as usize, ind.event_days.len());
            for exposure in [Exposure::Risk1, Exposure::Risk2] {
                prop_assert!(
                    case.intervals
                        .iter()
                        .filter(|iv| iv.exposure == exposure)
                        .count()
                        <= 1
                );
            }
            let in_risk = ind
                .event_days
                .iter()
                .filter(|&&t| {
                    ind.vaccination
                        .is_some_and(|r| r.in_risk_window(t, config.d_risk))
                })
                .count();
            let risk_events: u32 = case
                .intervals
                .iter()
                .filter(|iv| iv.exposure != Exposure::Baseline)
                .map(|iv| iv.events)
                .sum();
            prop_assert_eq!(risk_events as usize, in_risk);
        }
        Ok(())
    })
}

fn record_multiset(cohort: &Cohort) -> HashMap<Option<VaccinationRecord>, usize> {
    let mut counts = HashMap::new();
    for ind in &cohort.individuals {
        *counts.entry(ind.vaccination).or_default() += 1;
    }
    counts
}

fn events_unchanged(a: &Cohort, b: &Cohort) -> bool {
    a.individuals
        .iter()
        .zip(&b.individuals)
        .all(|(x, y)| x.id == y.id && x.event_days == y.event_days)
}

pub fn false_match_conservation(cases: u32) -> Result<(), String> {
    run(
        cases,
        (arb_config(), any::<u64>(), 0.0f64..=1.0),
        |(config, seed, p)| {
            let original = simulate_cohort(&config, seed).unwrap();
            let mut perturbed = original.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5);
            let pairs = inject_false_matches(&mut perturbed, p, &mut rng);
            prop_assert_eq!(
                pairs,
                (p * original.individuals.len() as f64 / 2.0).floor() as usize
            );
            prop_assert_eq!(record_multiset(&original), record_multiset(&perturbed));
            prop_assert!(events_unchanged(&original, &perturbed));
            let changed = original
                .individuals
                .iter()
                .zip(&perturbed.individuals)
                .filter(|(a, b)| a.vaccination != b.vaccination)
                .count();
            prop_assert!(changed <= 2 * pairs);
            Ok(())
        },
    )
}

pub fn missing_match_removal(cases: u32) -> Result<(), String> {
    run(
        cases,
        (arb_config(), any::<u64>(), 0.0f64..=1.0),
        |(config, seed, p)| {
            let original = simulate_cohort(&config, seed).unwrap();
            let mut perturbed = original.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5A5A);
            let removed = inject_missing_matches(&mut perturbed, p, &mut rng);
            let before = original.n_vaccinated();
            prop_assert_eq!(removed, missing_match_count(p, before));
            prop_assert_eq!(perturbed.n_vaccinated(), before - removed);
            prop_assert!(events_unchanged(&original, &perturbed));
            for (a, b) in original.individuals.iter().zip(&perturbed.individuals) {
                prop_assert!(b.vaccination.is_none() || b.vaccination == a.vaccination);
            }
            Ok(())
        },
    )
}

pub fn cox_exposure_swap_negates(cases: u32) -> Result<(), String> {
    run(cases, (any::<u64>(), any::<bool>()), |(seed, efron)| {
        let ties = if efron {
            TieMethod::Efron
        } else {
            TieMethod::Breslow
        };
        let rows = random_cox_rows(seed);
        let swapped: Vec<_> = rows
            .iter()
            .map(|r| CountingProcessRow {
                x1: !r.x1,
                x2: !r.x2,
                ..*r
            })
            .collect();
        let a = fit_cox(&rows, ties).ok().as_ref().and_then(estimates);
        let b = fit_cox(&swapped, ties).ok().as_ref().and_then(estimates);
        prop_assert_eq!(a.is_some(), b.is_some());
        if let (Some(a), Some(b)) = (a, b) {
            for k in 0..2 {
                prop_assert!((a[k] + b[k]).abs() < 1e-6, "{:?} vs {:?}", a, b);
            }
        }
        Ok(())
    })
}

pub fn cox_time_transform_invariance(cases: u32) -> Result<(), String> {
    run(
        cases,
        (any::<u64>(), 1u32..5, 0u32..4),
        |(seed, scale, square)| {
            let rows = random_cox_rows(seed);
            let f = |t: Day| square * t * t + scale * t;
            let transformed: Vec<_> = rows
                .iter()
                .map(|r| CountingProcessRow {
                    start: f(r.start),
                    stop: f(r.stop),
                    ..*r
                })
                .collect();
            let a = fit_cox(&rows, TieMethod::Breslow)
                .ok()
                .as_ref()
                .and_then(estimates);
            let b = fit_cox(&transformed, TieMethod::Breslow)
                .ok()
                .as_ref()
                .and_then(estimates);
            prop_assert_eq!(a.is_some(), b.is_some());
            if let (Some(a), Some(b)) = (a, b) {
                for k in 0..2 {
                    prop_assert!((a[k] - b[k]).abs() < 1e-9, "{:?} vs {:?}", a, b);
                }
            }
            Ok(())
        },
    )
}

pub fn sccs_length_scaling(cases: u32) -> Result<(), String> {
    run(cases, (any::<u64>(), 2u32..7), |(seed, k)| {
        let cases = random_sccs_cases(seed);
        let scaled: Vec<_> = cases
            .iter()
            .map(|c| SccsCase {
                intervals: c
                    .intervals
                    .iter()
                    .map(|iv| SccsInterval {
                        length: iv.length * k,
                        ..*iv
                    })
                    .collect(),
                observation_length: c.observation_length * k,
                ..c.clone()
            })
            .collect();
        let a = fit_sccs(&cases).ok().as_ref().and_then(estimates);
        let b = fit_sccs(&scaled).ok().as_ref().and_then(estimates);
        prop_assert_eq!(a.is_some(), b.is_some());
        if let (Some(a), Some(b)) = (a, b) {
            for k in 0..2 {
                prop_assert!((a[k] - b[k]).abs() < 1e-6, "{:?} vs {:?}", a, b);
            }
        }
        Ok(())
    })
}

pub fn mse_at_least_squared_bias(cases: u32) -> Result<(), String> {
    run(
        cases,
        (prop::collection::vec(0.01f64..20.0, 2..200), 0.1f64..10.0),
        |(estimates, truth)| {
            let p_values = vec![0.5; estimates.len()];
            let s = summarize_cell(&estimates, &p_values, 0, truth, 0.05).unwrap();
            prop_assert!(s.mse + 1e-12 * s.mse.max(1.0) >= s.bias * s.bias);
            prop_assert!(s.se_bias >= 0.0 && s.se_mse >= 0.0);
            Ok(())
        },
    )
}
