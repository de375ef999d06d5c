use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Bundled stand-in curve, produced by [`FirstDoseCurve::logistic_ramp`] with the
/// `DEFAULT_*` parameters below.
const BUNDLED_CSV: &str = include_str!("../../data/first_dose_curve.csv");

pub const DEFAULT_CAMPAIGN_DAYS: usize = 185;
/// Share with a first dose by the end of the campaign; roughly the German uptake by July 2021.
pub const DEFAULT_COVERAGE: f64 = 0.55;
pub const DEFAULT_MIDPOINT: f64 = 110.0;
pub const DEFAULT_SCALE: f64 = 18.0;

/// Daily probability that a still-unvaccinated person receives a first dose, indexed by
/// days since the campaign started.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstDoseCurve(Vec<f64>);

impl FirstDoseCurve {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if let Some((day, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(0.0..=1.0).contains(*p))
        {
            return Err(Error::InvalidConfig(format!(
                "first-dose probability {p} on campaign day {day} outside [0, 1]"
            )));
        }
        Ok(Self(probs))
    }

    /// A curve of identical daily probabilities.
    pub fn constant(len: usize, p: f64) -> Result<Self> {
        Self::new(vec![p; len])
    }

    /// Loads a `day,probability` CSV with contiguous days starting at 0.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|reason| Error::Curve {
            path: path.to_path_buf(),
            reason,
        })
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut probs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (day, prob) = line
                .split_once(',')
                .ok_or_else(|| format!("line {}: expected `day,probability`", lineno + 1))?;
            let (day, prob) = (day.trim(), prob.trim());
            if probs.is_empty() && day.eq_ignore_ascii_case("day") {
                continue;
            }
            let day: usize = day
                .parse()
                .map_err(|_| format!("line {}: bad day `{day}`", lineno + 1))?;
            let prob: f64 = prob
                .parse()
                .map_err(|_| format!("line {}: bad probability `{prob}`", lineno + 1))?;
            if day != probs.len() {
                return Err(format!(
                    "line {}: expected day {}, found {day}",
                    lineno + 1,
                    probs.len()
                ));
            }
            if !(0.0..=1.0).contains(&prob) {
                return Err(format!(
                    "line {}: probability {prob} outside [0, 1]",
                    lineno + 1
                ));
            }
            probs.push(prob);
        }
        if probs.is_empty() {
            return Err("no data rows".into());
        }
        Ok(Self(probs))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("day,probability\n");
        for (day, p) in self.0.iter().enumerate() {
            out.push_str(&format!("{day},{p:e}\n"));
        }
        out
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_CSV).expect("bundled first-dose curve is well-formed")
    }

    /// Hazard curve whose cumulative coverage follows a logistic ramp, normalised so that
    /// coverage is 0 before the first day and exactly `coverage` after the last one.
    pub fn logistic_ramp(days: usize, coverage: f64, midpoint: f64, scale: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&coverage) || scale <= 0.0 || days == 0 {
            return Err(Error::InvalidConfig(format!(
                "logistic ramp needs coverage in [0, 1), positive scale and length \
                 (got {coverage}, {scale}, {days})"
            )));
        }
        let sigmoid = |k: f64| 1.0 / (1.0 + (-(k - midpoint) / scale).exp());
        let lo = sigmoid(-1.0);
        let hi = sigmoid(days as f64 - 1.0);
        let cumulative = |k: f64| coverage * (sigmoid(k) - lo) / (hi - lo);
        let probs = (0..days)
            .map(|k| {
                let before = cumulative(k as f64 - 1.0);
                let after = cumulative(k as f64);
                ((after - before) / (1.0 - before)).clamp(0.0, 1.0)
            })
            .collect();
        Self::new(probs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Probability of having received a first dose by the end of each campaign day.
    pub fn cumulative_coverage(&self) -> Vec<f64> {
        let mut unvaccinated = 1.0;
        self.0
            .iter()
            .map(|q| {
                unvaccinated *= 1.0 - q;
                1.0 - unvaccinated
            })
            .collect()
    }
}
