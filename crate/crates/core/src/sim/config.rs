use std::fmt;

use super::curve::FirstDoseCurve;
use crate::error::{Error, Result};
use rand::Rng;

/// A day index on the simulation clock. Day 1 is the first simulated day.
pub type Day = u32;

const DIST_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VaccineType {
    BionTech,
    Moderna,
    AstraZeneca,
    Janssen,
}

impl VaccineType {
    pub const ALL: [VaccineType; 4] = [
        VaccineType::BionTech,
        VaccineType::Moderna,
        VaccineType::AstraZeneca,
        VaccineType::Janssen,
    ];

    /// Only mRNA doses raise the event hazard.
    pub fn is_mrna(self) -> bool {
        matches!(self, VaccineType::BionTech | VaccineType::Moderna)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for VaccineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            VaccineType::BionTech => "BionTech",
            VaccineType::Moderna => "Moderna",
            VaccineType::AstraZeneca => "AstraZeneca",
            VaccineType::Janssen => "Janssen",
        };
        f.write_str(name)
    }
}

/// Probability of each vaccine type, in [`VaccineType::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VaccineTypeDist {
    probs: [f64; 4],
    cumulative: [f64; 4],
}

impl VaccineTypeDist {
    /// Vaccine shares of first doses in Germany as of July 2021.
    pub const REPORTED_SHARES: [f64; 4] = [0.6777, 0.08083, 0.1993, 0.04216];

    pub fn new(probs: [f64; 4]) -> Result<Self> {
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidDistribution(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > DIST_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        let mut cumulative = [0.0; 4];
        let mut acc = 0.0;
        for (c, p) in cumulative.iter_mut().zip(probs) {
            acc += p;
            *c = acc;
        }
        Ok(Self { probs, cumulative })
    }

    /// Rescales non-negative weights to a distribution.
    pub fn from_weights(weights: [f64; 4]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || total <= 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "weights {weights:?} cannot be normalised"
            )));
        }
        let mut probs = weights.map(|w| w / total);
        // Push the rounding residue onto the largest entry so the sum is 1 to machine precision.
        let residue = 1.0 - probs.iter().sum::<f64>();
        let largest = (0..4)
            .max_by(|&a, &b| probs[a].total_cmp(&probs[b]))
            .unwrap_or(0);
        probs[largest] += residue;
        Self::new(probs)
    }

    /// The reported shares, renormalised (they sum to 0.99999 as published).
    pub fn reported() -> Self {
        Self::from_weights(Self::REPORTED_SHARES).expect("reported shares are valid weights")
    }

    pub fn probs(&self) -> [f64; 4] {
        self.probs
    }

    pub fn probability(&self, vaccine: VaccineType) -> f64 {
        self.probs[vaccine.index()]
    }
}

impl Default for VaccineTypeDist {
    fn default() -> Self {
        Self::reported()
    }
}

/// Draws one vaccine type by inverse-CDF sampling.
pub fn sample_vaccine_type<R: Rng + ?Sized>(dist: &VaccineTypeDist, rng: &mut R) -> VaccineType {
    let u: f64 = rng.random();
    dist.cumulative
        .iter()
        .position(|&c| u < c)
        .map(|i| VaccineType::ALL[i])
        // u can only exceed the last cumulative value through rounding; fall back to the
        // last type that has positive mass.
        .unwrap_or_else(|| {
            let last = dist.probs.iter().rposition(|&p| p > 0.0).unwrap_or(3);
            VaccineType::ALL[last]
        })
}

/// Converts an annual event probability into the per-day probability of independent daily
/// Bernoulli trials: `1 - (1 - p_year)^(1/365)`.
pub fn annual_to_daily_probability(p_year: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_year) {
        return Err(Error::InvalidConfig(format!(
            "annual probability {p_year} outside [0, 1]"
        )));
    }
    // -expm1(ln1p(-p)/365) keeps full precision for small p.
    Ok(-((-p_year).ln_1p() / 365.0).exp_m1())
}

/// All parameters of the data-generating process.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_sim: u32,
    pub n_days: Day,
    /// First day on which first doses can be administered.
    pub campaign_start_day: Day,
    pub d_risk: u32,
    pub d_immune: u32,
    pub rr_vacc: f64,
    pub p_event_year: f64,
    pub first_dose_curve: FirstDoseCurve,
    pub vaccine_type_dist: VaccineTypeDist,
    pub second_dose_gap_mrna: u32,
    pub second_dose_gap_az: u32,
}

impl SimConfig {
    /// The full-size study: 770,000 people over 550 days, campaign starting after day 365.
    pub fn table1() -> Self {
        Self {
            n_sim: 770_000,
            n_days: 550,
            campaign_start_day: 366,
            d_risk: 21,
            d_immune: 42,
            rr_vacc: 3.24,
            p_event_year: 0.00016,
            first_dose_curve: FirstDoseCurve::bundled(),
            vaccine_type_dist: VaccineTypeDist::reported(),
            second_dose_gap_mrna: 42,
            second_dose_gap_az: 84,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n_sim == 0 {
            return fail("n_sim must be positive".into());
        }
        if self.n_days == 0 {
            return fail("n_days must be positive".into());
        }
        if self.campaign_start_day == 0 || self.campaign_start_day > self.n_days {
            return fail(format!(
                "campaign_start_day {} must lie in 1..={}",
                self.campaign_start_day, self.n_days
            ));
        }
        if !(self.rr_vacc > 0.0 && self.rr_vacc.is_finite()) {
            return fail(format!("rr_vacc must be positive, got {}", self.rr_vacc));
        }
        let p_day = annual_to_daily_probability(self.p_event_year)?;
        if p_day * self.rr_vacc > 1.0 {
            return fail(format!(
                "elevated daily probability {} exceeds 1",
                p_day * self.rr_vacc
            ));
        }
        if self.second_dose_gap_mrna == 0 || self.second_dose_gap_az == 0 {
            return fail("second-dose gaps must be positive".into());
        }
        let needed = self.campaign_days();
        if self.first_dose_curve.len() < needed {
            return fail(format!(
                "first-dose curve has {} entries, campaign needs {needed}",
                self.first_dose_curve.len()
            ));
        }
        Ok(())
    }

    /// Number of campaign days, `campaign_start_day..=n_days`.
    pub fn campaign_days(&self) -> usize {
        (self.n_days + 1).saturating_sub(self.campaign_start_day) as usize
    }

    pub fn p_day(&self) -> Result<f64> {
        annual_to_daily_probability(self.p_event_year)
    }

    pub fn second_dose_gap(&self, vaccine: VaccineType) -> Option<u32> {
        match vaccine {
            VaccineType::BionTech | VaccineType::Moderna => Some(self.second_dose_gap_mrna),
            VaccineType::AstraZeneca => Some(self.second_dose_gap_az),
            VaccineType::Janssen => None,
        }
    }

    /// Day of the second dose, dropped when it would fall after the last simulated day.
    pub fn schedule_second_dose(&self, vaccine: VaccineType, dose1_day: Day) -> Option<Day> {
        self.second_dose_gap(vaccine)
            .map(|gap| dose1_day + gap)
            .filter(|&day| day <= self.n_days)
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        Self::table1()
    }
}
