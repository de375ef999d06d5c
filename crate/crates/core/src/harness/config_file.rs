//! The flat TOML run configuration.
//!
//! Every key is optional; absent keys take the full-size study defaults.
//!
//! | key | default | meaning |
//! |-----|---------|---------|
//! | `n_sim` | 770000 | population size |
//! | `n_days` | 550 | simulated days |
//! | `campaign_start_day` | 366 | first day with first doses |
//! | `d_risk` | 21 | risk window after an mRNA dose, in days after the dose day |
//! | `d_immune` | 42 | days after an event during which it cannot recur |
//! | `rr_vacc` | 3.24 | relative risk inside a risk window |
//! | `p_event_year` | 0.00016 | annual baseline event probability |
//! | `first_dose_curve` | bundled curve | `day,probability` CSV, relative to the config file |
//! | `p_biontech`, `p_moderna`, `p_astrazeneca`, `p_janssen` | reported shares, renormalised | vaccine-type distribution |
//! | `second_dose_gap_mrna` | 42 | days between mRNA doses |
//! | `second_dose_gap_az` | 84 | days between AstraZeneca doses |
//! | `p_missing_match` | `[0, 0.1, 0.2, 0.3, 0.4, 0.5]` | one scenario per entry |
//! | `p_false_match` | 0.00005 | false-match proportion in every scenario |
//! | `reps` | 2000 | replications per scenario |
//! | `alpha` | 0.05 | significance level |
//! | `seed` | 1 | master seed |
//! | `ties` | `"efron"` | `"efron"` or `"breslow"` |

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::scenario::ScenarioSpec;
use crate::error::{Error, Result};
use crate::estimators::TieMethod;
use crate::linkage::ErrorSpec;
use crate::sim::{FirstDoseCurve, SimConfig, VaccineTypeDist};

pub const DEFAULT_MISSING_GRID: [f64; 6] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];
pub const DEFAULT_FALSE_MATCH: f64 = 0.00005;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ties {
    Efron,
    Breslow,
}

impl From<Ties> for TieMethod {
    fn from(t: Ties) -> Self {
        match t {
            Ties::Efron => TieMethod::Efron,
            Ties::Breslow => TieMethod::Breslow,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n_sim: u32,
    pub n_days: u32,
    pub campaign_start_day: u32,
    pub d_risk: u32,
    pub d_immune: u32,
    pub rr_vacc: f64,
    pub p_event_year: f64,
    pub first_dose_curve: Option<PathBuf>,
    pub p_biontech: f64,
    pub p_moderna: f64,
    pub p_astrazeneca: f64,
    pub p_janssen: f64,
    pub second_dose_gap_mrna: u32,
    pub second_dose_gap_az: u32,
    pub p_missing_match: Vec<f64>,
    pub p_false_match: f64,
    pub reps: usize,
    pub alpha: f64,
    pub seed: u64,
    pub ties: Ties,
}

impl Default for RunConfig {
    fn default() -> Self {
        let sim = SimConfig::table1();
        let [p_biontech, p_moderna, p_astrazeneca, p_janssen] = sim.vaccine_type_dist.probs();
        Self {
            n_sim: sim.n_sim,
            n_days: sim.n_days,
            campaign_start_day: sim.campaign_start_day,
            d_risk: sim.d_risk,
            d_immune: sim.d_immune,
            rr_vacc: sim.rr_vacc,
            p_event_year: sim.p_event_year,
            first_dose_curve: None,
            p_biontech,
            p_moderna,
            p_astrazeneca,
            p_janssen,
            second_dose_gap_mrna: sim.second_dose_gap_mrna,
            second_dose_gap_az: sim.second_dose_gap_az,
            p_missing_match: DEFAULT_MISSING_GRID.to_vec(),
            p_false_match: DEFAULT_FALSE_MATCH,
            reps: 2000,
            alpha: 0.05,
            seed: 1,
            ties: Ties::Efron,
        }
    }
}

impl RunConfig {
    /// Reads a config file; a relative `first_dose_curve` is resolved against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut config = Self::parse(&text).map_err(|reason| Error::Parse {
            path: path.to_path_buf(),
            reason,
        })?;
        if let Some(curve) = &config.first_dose_curve {
            if curve.is_relative() {
                let base = path.parent().unwrap_or_else(|| Path::new("."));
                config.first_dose_curve = Some(base.join(curve));
            }
        }
        Ok(config)
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        let first_dose_curve = match &self.first_dose_curve {
            Some(path) => FirstDoseCurve::load(path)?,
            None => FirstDoseCurve::bundled(),
        };
        let vaccine_type_dist = VaccineTypeDist::new([
            self.p_biontech,
            self.p_moderna,
            self.p_astrazeneca,
            self.p_janssen,
        ])?;
        let config = SimConfig {
            n_sim: self.n_sim,
            n_days: self.n_days,
            campaign_start_day: self.campaign_start_day,
            d_risk: self.d_risk,
            d_immune: self.d_immune,
            rr_vacc: self.rr_vacc,
            p_event_year: self.p_event_year,
            first_dose_curve,
            vaccine_type_dist,
            second_dose_gap_mrna: self.second_dose_gap_mrna,
            second_dose_gap_az: self.second_dose_gap_az,
        };
        config.validate()?;
        Ok(config)
    }

    /// One scenario per missing-match proportion, in file order.
    pub fn scenarios(&self) -> Result<Vec<ScenarioSpec>> {
        if self.p_missing_match.is_empty() {
            return Err(Error::InvalidConfig("p_missing_match grid is empty".into()));
        }
        self.p_missing_match
            .iter()
            .enumerate()
            .map(|(id, &p_missing)| {
                let spec = ScenarioSpec {
                    id,
                    errors: ErrorSpec::new(p_missing, self.p_false_match)?,
                    replications: self.reps,
                    alpha: self.alpha,
                    master_seed: self.seed,
                };
                spec.validate()?;
                Ok(spec)
            })
            .collect()
    }
}
