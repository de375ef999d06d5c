//! Cohort generation.
//!
//! [`simulate_cohort`] is the production path. Instead of one Bernoulli trial per person and
//! day it draws the first-dose day by inverting the cumulative uptake curve and skips
//! through stretches of constant event hazard with geometric waiting times. Both draws
//! reproduce the per-day marginals of the day-by-day process, which is kept as
//! [`simulate_cohort_daily`] for equivalence testing and small cohorts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cohort::{Cohort, Dose, IndividualRecord, VaccinationRecord};
use super::config::{sample_vaccine_type, Day, SimConfig};
use crate::error::Result;

/// Number of Bernoulli failures before the first success, `p` per trial.
fn geometric_gap<R: Rng + ?Sized>(rng: &mut R, p: f64) -> u64 {
    if p <= 0.0 {
        return u64::MAX;
    }
    if p >= 1.0 {
        return 0;
    }
    // 1 - U lies in (0, 1], so the logarithm is finite.
    let u = 1.0 - rng.random::<f64>();
    (u.ln() / (-p).ln_1p()).floor() as u64
}

fn vaccinate<R: Rng + ?Sized>(
    config: &SimConfig,
    dose1_day: Day,
    rng: &mut R,
) -> VaccinationRecord {
    let vaccine_type = sample_vaccine_type(&config.vaccine_type_dist, rng);
    VaccinationRecord {
        dose1_day,
        dose2_day: config.schedule_second_dose(vaccine_type, dose1_day),
        vaccine_type,
    }
}

/// Elevated-hazard day ranges of one person, clipped to the horizon, sorted and merged.
fn elevated_segments(record: &VaccinationRecord, config: &SimConfig) -> ([(Day, Day); 2], usize) {
    let mut segments = [(0, 0); 2];
    let mut len = 0;
    for dose in [Dose::First, Dose::Second] {
        if let Some((lo, hi)) = record.risk_window(dose, config.d_risk) {
            if lo > config.n_days {
                continue;
            }
            let hi = hi.min(config.n_days);
            if len == 1 && lo <= segments[0].1 + 1 {
                segments[0].1 = segments[0].1.max(hi);
            } else {
                segments[len] = (lo, hi);
                len += 1;
            }
        }
    }
    (segments, len)
}

fn simulate_events<R: Rng + ?Sized>(
    config: &SimConfig,
    vaccination: Option<&VaccinationRecord>,
    p_day: f64,
    rng: &mut R,
) -> Vec<Day> {
    let (segments, n_segments) = match vaccination {
        Some(rec) if config.rr_vacc != 1.0 => elevated_segments(rec, config),
        _ => ([(0, 0); 2], 0),
    };
    let segments = &segments[..n_segments];
    let p_elevated = p_day * config.rr_vacc;
    let n_days = u64::from(config.n_days);

    let mut events = Vec::new();
    let mut day = 1u64;
    let mut next_segment = 0;
    while day <= n_days {
        let (hazard, segment_end) = match segments.get(next_segment) {
            Some(&(lo, _)) if day < u64::from(lo) => (p_day, u64::from(lo) - 1),
            Some(&(_, hi)) if day <= u64::from(hi) => (p_elevated, u64::from(hi)),
            Some(_) => {
                next_segment += 1;
                continue;
            }
            None => (p_day, n_days),
        };
        let event_day = day.saturating_add(geometric_gap(rng, hazard));
        if event_day <= segment_end {
            events.push(event_day as Day);
            day = event_day + u64::from(config.d_immune) + 1;
        } else {
            day = segment_end + 1;
        }
    }
    events
}

/// Generates a cohort; a pure function of `(config, seed)`.
pub fn simulate_cohort(config: &SimConfig, seed: u64) -> Result<Cohort> {
    config.validate()?;
    let p_day = config.p_day()?;
    let campaign_days = config.campaign_days();
    let coverage = {
        let curve = &config.first_dose_curve.as_slice()[..campaign_days];
        let mut unvaccinated = 1.0;
        curve
            .iter()
            .map(|q| {
                unvaccinated *= 1.0 - q;
                1.0 - unvaccinated
            })
            .collect::<Vec<f64>>()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let individuals = (0..config.n_sim)
        .map(|id| {
            let u: f64 = rng.random();
            let offset = coverage.partition_point(|&c| c <= u);
            let vaccination = (offset < campaign_days)
                .then(|| vaccinate(config, config.campaign_start_day + offset as Day, &mut rng));
            let event_days = simulate_events(config, vaccination.as_ref(), p_day, &mut rng);
            IndividualRecord {
                id,
                vaccination,
                event_days,
            }
        })
        .collect();

    Ok(Cohort {
        individuals,
        config: config.clone(),
        seed,
    })
}

/// Reference generator: one Bernoulli trial per person and day for vaccination and for the
/// event. Same distribution as [`simulate_cohort`], different random-number consumption.
pub fn simulate_cohort_daily(config: &SimConfig, seed: u64) -> Result<Cohort> {
    config.validate()?;
    let p_day = config.p_day()?;
    let curve = config.first_dose_curve.as_slice();
    let n = config.n_sim as usize;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vaccination: Vec<Option<VaccinationRecord>> = vec![None; n];
    let mut event_days: Vec<Vec<Day>> = vec![Vec::new(); n];
    let mut eligible_from: Vec<Day> = vec![1; n];

    for t in 1..=config.n_days {
        for i in 0..n {
            if vaccination[i].is_none() && t >= config.campaign_start_day {
                let q = curve[(t - config.campaign_start_day) as usize];
                if rng.random::<f64>() < q {
                    vaccination[i] = Some(vaccinate(config, t, &mut rng));
                }
            }
            if t >= eligible_from[i] {
                let elevated = vaccination[i]
                    .as_ref()
                    .is_some_and(|rec| rec.in_risk_window(t, config.d_risk));
                let hazard = if elevated {
                    p_day * config.rr_vacc
                } else {
                    p_day
                };
                if rng.random::<f64>() < hazard {
                    event_days[i].push(t);
                    eligible_from[i] = t + config.d_immune + 1;
                }
            }
        }
    }

    let individuals = vaccination
        .into_iter()
        .zip(event_days)
        .enumerate()
        .map(|(id, (vaccination, event_days))| IndividualRecord {
            id: id as u32,
            vaccination,
            event_days,
        })
        .collect();
    Ok(Cohort {
        individuals,
        config: config.clone(),
        seed,
    })
}
