//! Record-linkage error injection.
//!
//! Both error types act on vaccination data only; event histories always come through
//! untouched. Missing matches delete the vaccination record of randomly chosen vaccinated
//! people, false matches swap the (possibly absent) records within random pairs of people.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::sim::Cohort;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSpec {
    /// Share of vaccinated people whose vaccination fails to link.
    pub p_missing_match: f64,
    /// Share of all people whose vaccination record belongs to somebody else.
    pub p_false_match: f64,
}

impl ErrorSpec {
    pub const NONE: ErrorSpec = ErrorSpec {
        p_missing_match: 0.0,
        p_false_match: 0.0,
    };

    pub fn new(p_missing_match: f64, p_false_match: f64) -> Result<Self> {
        for (name, p) in [
            ("p_missing_match", p_missing_match),
            ("p_false_match", p_false_match),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!("{name} = {p} outside [0, 1]")));
            }
        }
        Ok(Self {
            p_missing_match,
            p_false_match,
        })
    }

    /// Applies missing matches first, then false matches. Returns the number of removed
    /// records and swapped pairs.
    pub fn apply<R: Rng + ?Sized>(&self, cohort: &mut Cohort, rng: &mut R) -> (usize, usize) {
        let removed = inject_missing_matches(cohort, self.p_missing_match, rng);
        let swapped = inject_false_matches(cohort, self.p_false_match, rng);
        (removed, swapped)
    }
}

/// `round(p * n_vaccinated)`, half away from zero.
pub fn missing_match_count(p: f64, n_vaccinated: usize) -> usize {
    (p * n_vaccinated as f64).round() as usize
}

/// `floor(p * n / 2)` pairs.
pub fn false_match_pairs(p: f64, n: usize) -> usize {
    (p * n as f64 / 2.0).floor() as usize
}

/// Removes the vaccination record of `round(p * n_vaccinated)` vaccinated people chosen
/// uniformly without replacement. Returns the number removed.
pub fn inject_missing_matches<R: Rng + ?Sized>(cohort: &mut Cohort, p: f64, rng: &mut R) -> usize {
    assert!(
        (0.0..=1.0).contains(&p),
        "missing-match proportion {p} outside [0, 1]"
    );
    let vaccinated: Vec<usize> = cohort
        .individuals
        .iter()
        .enumerate()
        .filter_map(|(i, ind)| ind.vaccination.is_some().then_some(i))
        .collect();
    let k = missing_match_count(p, vaccinated.len());
    if k == 0 {
        return 0;
    }
    for pick in index::sample(rng, vaccinated.len(), k) {
        cohort.individuals[vaccinated[pick]].vaccination = None;
    }
    k
}

/// Swaps vaccination records within `floor(p * n / 2)` disjoint, uniformly chosen pairs.
/// Returns the number of pairs.
pub fn inject_false_matches<R: Rng + ?Sized>(cohort: &mut Cohort, p: f64, rng: &mut R) -> usize {
    assert!(
        (0.0..=1.0).contains(&p),
        "false-match proportion {p} outside [0, 1]"
    );
    let n = cohort.individuals.len();
    let pairs = false_match_pairs(p, n);
    if pairs == 0 {
        return 0;
    }
    // index::sample returns the picks in random order, so consecutive picks form
    // uniformly random disjoint pairs.
    let picks = index::sample(rng, n, 2 * pairs).into_vec();
    for pair in picks.chunks_exact(2) {
        let (a, b) = (pair[0], pair[1]);
        let record_a = cohort.individuals[a].vaccination.take();
        let record_b = std::mem::replace(&mut cohort.individuals[b].vaccination, record_a);
        cohort.individuals[a].vaccination = record_b;
    }
    pairs
}
