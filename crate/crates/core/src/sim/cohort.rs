use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use super::config::{Day, SimConfig, VaccineType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dose {
    First,
    Second,
}

/// Vaccination history of one person. Only the doses that fall inside the simulated
/// horizon are recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VaccinationRecord {
    pub dose1_day: Day,
    pub dose2_day: Option<Day>,
    pub vaccine_type: VaccineType,
}

impl VaccinationRecord {
    /// The closed risk window `[dose_day, dose_day + d_risk]` of an mRNA dose; `None` for
    /// vector vaccines or a missing dose.
    pub fn risk_window(&self, dose: Dose, d_risk: u32) -> Option<(Day, Day)> {
        if !self.vaccine_type.is_mrna() {
            return None;
        }
        let start = match dose {
            Dose::First => self.dose1_day,
            Dose::Second => self.dose2_day?,
        };
        Some((start, start + d_risk))
    }

    pub fn in_dose_window(&self, dose: Dose, t: Day, d_risk: u32) -> bool {
        self.risk_window(dose, d_risk)
            .is_some_and(|(lo, hi)| (lo..=hi).contains(&t))
    }

    /// Whether the event hazard on day `t` is elevated by this vaccination.
    pub fn in_risk_window(&self, t: Day, d_risk: u32) -> bool {
        self.in_dose_window(Dose::First, t, d_risk) || self.in_dose_window(Dose::Second, t, d_risk)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndividualRecord {
    pub id: u32,
    pub vaccination: Option<VaccinationRecord>,
    /// Strictly increasing event days.
    pub event_days: Vec<Day>,
}

impl IndividualRecord {
    pub fn first_event(&self) -> Option<Day> {
        self.event_days.first().copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cohort {
    pub individuals: Vec<IndividualRecord>,
    pub config: SimConfig,
    pub seed: u64,
}

impl Cohort {
    pub fn n_vaccinated(&self) -> usize {
        self.individuals
            .iter()
            .filter(|ind| ind.vaccination.is_some())
            .count()
    }

    pub fn n_events(&self) -> usize {
        self.individuals
            .iter()
            .map(|ind| ind.event_days.len())
            .sum()
    }

    /// Stable hash of all individual records; equal cohorts give equal fingerprints.
    pub fn fingerprint(&self) -> u64 {
        let mut hasher = DefaultHasher::new();
        self.seed.hash(&mut hasher);
        self.individuals.hash(&mut hasher);
        hasher.finish()
    }
}
