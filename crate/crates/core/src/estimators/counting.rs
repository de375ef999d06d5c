use crate::sim::{Cohort, Day, Dose, VaccinationRecord};

/// One `(start, stop]` interval of a subject's follow-up with constant covariates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountingProcessRow {
    pub subject: u32,
    pub start: Day,
    pub stop: Day,
    pub event: bool,
    /// Inside the dose-1 risk window.
    pub x1: bool,
    /// Inside the dose-2 risk window.
    pub x2: bool,
}

impl CountingProcessRow {
    pub fn class(&self) -> usize {
        usize::from(self.x1) + 2 * usize::from(self.x2)
    }
}

/// Window of one dose in half-open interval form `(dose_day - 1, dose_day + d_risk]`.
fn window(record: Option<&VaccinationRecord>, dose: Dose, d_risk: u32) -> Option<(Day, Day)> {
    record
        .and_then(|rec| rec.risk_window(dose, d_risk))
        .map(|(lo, hi)| (lo - 1, hi))
}

fn covers(window: Option<(Day, Day)>, day: Day) -> bool {
    window.is_some_and(|(lo, hi)| lo < day && day <= hi)
}

/// Splits each person's follow-up into counting-process rows.
///
/// Follow-up runs from day 0 to the first event (which ends the last row with `event = true`)
/// or to the last simulated day. Rows break wherever a risk-window indicator changes.
pub fn build_counting_process(cohort: &Cohort) -> Vec<CountingProcessRow> {
    let config = &cohort.config;
    let mut rows = Vec::with_capacity(cohort.individuals.len() * 2);
    for ind in &cohort.individuals {
        let (end, event) = match ind.first_event() {
            Some(day) => (day, true),
            None => (config.n_days, false),
        };
        let record = ind.vaccination.as_ref();
        let w1 = window(record, Dose::First, config.d_risk);
        let w2 = window(record, Dose::Second, config.d_risk);

        let mut cuts = [0 as Day; 4];
        let mut n_cuts = 0;
        for (lo, hi) in [w1, w2].into_iter().flatten() {
            for cut in [lo, hi] {
                if cut > 0 && cut < end {
                    cuts[n_cuts] = cut;
                    n_cuts += 1;
                }
            }
        }
        let cuts = &mut cuts[..n_cuts];
        cuts.sort_unstable();

        let mut start = 0;
        let boundaries = cuts.iter().copied().chain(std::iter::once(end));
        let mut previous: Option<Day> = None;
        for stop in boundaries {
            if previous == Some(stop) {
                continue;
            }
            previous = Some(stop);
            rows.push(CountingProcessRow {
                subject: ind.id,
                start,
                stop,
                event: event && stop == end,
                x1: covers(w1, stop),
                x2: covers(w2, stop),
            });
            start = stop;
        }
    }
    rows
}
