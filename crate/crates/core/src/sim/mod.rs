//! Discrete-day generation of vaccination and adverse-event histories.

mod cohort;
mod config;
mod curve;
mod generate;

pub use cohort::{Cohort, Dose, IndividualRecord, VaccinationRecord};
pub use config::{
    annual_to_daily_probability, sample_vaccine_type, Day, SimConfig, VaccineType, VaccineTypeDist,
};
pub use curve::{
    FirstDoseCurve, DEFAULT_CAMPAIGN_DAYS, DEFAULT_COVERAGE, DEFAULT_MIDPOINT, DEFAULT_SCALE,
};
pub use generate::{simulate_cohort, simulate_cohort_daily};
