//! The two analysis methods: a Cox model with time-varying dose-specific risk-window
//! indicators and the self-controlled case series. Each estimates one log relative risk for
//! the first and one for the second dose.
//!
//! Both fitters reduce their input to strata (event times for Cox, cases for the SCCS) of at
//! most four exposure classes, `class = x1 + 2 * x2`. With binary covariates this is an exact
//! sufficient reduction, so a full-size cohort costs a single pass to aggregate and each
//! Newton step only touches a few hundred strata.

mod counting;
mod cox;
mod inference;
mod newton;
mod sccs;

pub use counting::{build_counting_process, CountingProcessRow};
pub use cox::{fit_cox, TieMethod};
pub use inference::wald_p;
pub use newton::{LOGLIK_TOLERANCE, MAX_ITERATIONS, SCORE_TOLERANCE};
pub use sccs::{build_sccs_cases, fit_sccs, Exposure, SccsCase, SccsInterval};

use newton::{maximize, NewtonOutcome, Objective, Stop};

/// Estimate of one log relative risk with its Wald inference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientEstimate {
    pub log_effect: f64,
    /// Standard error on the log scale; NaN when the information matrix is singular.
    pub se: f64,
    /// Two-sided Wald p-value for a null log effect; NaN when `se` is undefined.
    pub p_value: f64,
}

impl CoefficientEstimate {
    /// Effect on the ratio scale (hazard ratio or relative incidence).
    pub fn ratio(&self) -> f64 {
        self.log_effect.exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coefficient {
    Estimated(CoefficientEstimate),
    /// The data carry no contrast for this exposure.
    Unidentifiable,
    /// The estimate diverges, e.g. no events at all in this exposure's risk time. The other
    /// coefficient is fitted with this one at its limit.
    Separated(Limit),
}

/// Ratio-scale limit of a separated coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    Zero,
    Infinite,
}

impl Coefficient {
    pub fn estimate(&self) -> Option<&CoefficientEstimate> {
        match self {
            Coefficient::Estimated(est) => Some(est),
            Coefficient::Unidentifiable | Coefficient::Separated(_) => None,
        }
    }
}

/// Why a fit did not converge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitIssue {
    /// The likelihood increases without bound along a direction mixing both coefficients
    /// (e.g. every event falls in one risk window or the other).
    Separation,
    MaxIterations,
    SingularInformation,
    /// No step along the Newton direction increased the likelihood.
    Stalled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Dose 1 and dose 2.
    pub coefficients: [Coefficient; 2],
    pub converged: bool,
    pub iterations: usize,
    pub log_likelihood: f64,
    pub issue: Option<FitIssue>,
}

impl FitResult {
    pub fn dose(&self, dose: usize) -> &Coefficient {
        &self.coefficients[dose - 1]
    }
}

pub(crate) const N_CLASSES: usize = 4;

pub(crate) fn class_covariates(class: usize) -> [f64; 2] {
    [(class & 1) as f64, (class >> 1) as f64]
}

/// Exposure-class totals of one stratum: person-time or at-risk counts, and events.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Stratum {
    pub weight: [f64; N_CLASSES],
    pub events: [f64; N_CLASSES],
}

impl Stratum {
    fn available(&self) -> impl Iterator<Item = usize> + '_ {
        (0..N_CLASSES).filter(|&c| self.weight[c] > 0.0)
    }

    pub fn total_events(&self) -> f64 {
        self.events.iter().sum()
    }
}

/// A coefficient is identifiable when at least one stratum contrasts exposed with
/// unexposed classes for it.
pub(crate) fn identifiable(strata: &[Stratum], k: usize) -> bool {
    strata.iter().any(|s| {
        let mut values = s.available().map(|c| class_covariates(c)[k]);
        match values.next() {
            Some(first) => values.any(|v| v != first),
            None => false,
        }
    })
}

/// Whether every event sits in a class maximising `v . z` within its stratum, with at least
/// one stratum holding events where `v . z` is not constant. The likelihood then grows
/// without bound along `v`.
fn separates(strata: &[Stratum], v: [f64; 2]) -> bool {
    let score = |c: usize| {
        let z = class_covariates(c);
        v[0] * z[0] + v[1] * z[1]
    };
    let mut strict = false;
    let all_events_on_top = strata.iter().all(|s| {
        let (lo, hi) = s
            .available()
            .map(score)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            });
        if hi > lo && s.total_events() > 0.0 {
            strict = true;
        }
        (0..N_CLASSES).all(|c| s.events[c] == 0.0 || score(c) >= hi)
    });
    all_events_on_top && strict
}

/// Detects (quasi-)complete separation along any direction in the active coefficients.
///
/// With four classes the ordering of `v . z` over classes only depends on the signs of
/// `v1`, `v2`, `v1 - v2` and `v1 + v2`, all of which are realised on the grid `{-2..2}^2`.
pub(crate) fn separated(strata: &[Stratum], active: [bool; 2]) -> bool {
    for a in -2i32..=2 {
        for b in -2i32..=2 {
            if (a, b) == (0, 0) || (!active[0] && a != 0) || (!active[1] && b != 0) {
                continue;
            }
            if separates(strata, [f64::from(a), f64::from(b)]) {
                return true;
            }
        }
    }
    false
}

/// Sends coefficients that diverge on their own (separation along a coordinate axis) to
/// their limit: within every stratum that contrasts the coefficient, the classes on the
/// losing side get zero weight. Repeats until no axis is separated and updates `active`.
/// Returns the limit of each coefficient that diverged.
fn remove_axis_separation(strata: &mut [Stratum], active: &mut [bool; 2]) -> [Option<Limit>; 2] {
    let mut diverged = [None; 2];
    loop {
        let mut changed = false;
        for k in 0..2 {
            if !active[k] {
                continue;
            }
            for sign in [1.0, -1.0] {
                let mut v = [0.0; 2];
                v[k] = sign;
                if !separates(strata, v) {
                    continue;
                }
                let on_top = |c: usize| (class_covariates(c)[k] == 1.0) == (sign > 0.0);
                for s in strata.iter_mut() {
                    let contrasted = s.available().any(on_top) && s.available().any(|c| !on_top(c));
                    if contrasted {
                        for c in (0..N_CLASSES).filter(|&c| !on_top(c)) {
                            s.weight[c] = 0.0;
                            s.events[c] = 0.0;
                        }
                    }
                }
                diverged[k] = Some(if sign > 0.0 {
                    Limit::Infinite
                } else {
                    Limit::Zero
                });
                active[k] = false;
                changed = true;
                break;
            }
        }
        for (k, on) in active.iter_mut().enumerate() {
            *on = *on && identifiable(strata, k);
        }
        if !changed {
            return diverged;
        }
    }
}

/// Shared driver of both fitters: identifiability, separation handling and Newton-Raphson
/// over the remaining coefficients. `objective` builds the likelihood from the (possibly
/// reduced) strata and the indices of the coefficients to estimate.
pub(crate) fn fit_strata<O: Objective>(
    mut strata: Vec<Stratum>,
    objective: impl FnOnce(Vec<Stratum>, Vec<usize>) -> O,
) -> FitResult {
    let mut active = [identifiable(&strata, 0), identifiable(&strata, 1)];
    let diverged = remove_axis_separation(&mut strata, &mut active);
    let joint_separation = separated(&strata, active);
    let objective = objective(strata, (0..2).filter(|&k| active[k]).collect());
    let mut coefficients = [Coefficient::Unidentifiable; 2];
    for k in 0..2 {
        if let Some(limit) = diverged[k] {
            coefficients[k] = Coefficient::Separated(limit);
        }
    }
    if objective.dim() == 0 {
        return FitResult {
            coefficients,
            converged: true,
            iterations: 0,
            log_likelihood: objective.evaluate(&[], &mut [], &mut []),
            issue: None,
        };
    }
    let outcome = maximize(&objective);
    assemble(&outcome, active, coefficients, joint_separation)
}

/// Assembles a [`FitResult`] from a Newton run over the `active` coefficients; the other
/// entries of `coefficients` are kept.
fn assemble(
    outcome: &NewtonOutcome,
    active: [bool; 2],
    mut coefficients: [Coefficient; 2],
    separation: bool,
) -> FitResult {
    let n = outcome.beta.len();
    let mut slot = 0;
    for (k, coefficient) in coefficients.iter_mut().enumerate() {
        if !active[k] {
            continue;
        }
        let log_effect = outcome.beta[slot];
        let se = outcome
            .covariance
            .as_ref()
            .map(|cov| cov[slot * n + slot])
            .filter(|v| *v > 0.0 && v.is_finite())
            .map_or(f64::NAN, f64::sqrt);
        let p_value = wald_p(log_effect, se).unwrap_or(f64::NAN);
        *coefficient = Coefficient::Estimated(CoefficientEstimate {
            log_effect,
            se,
            p_value,
        });
        slot += 1;
    }
    let issue = if separation {
        Some(FitIssue::Separation)
    } else {
        match outcome.stop {
            Stop::Converged => None,
            Stop::MaxIterations => Some(FitIssue::MaxIterations),
            Stop::Singular => Some(FitIssue::SingularInformation),
            Stop::NoAscent => Some(FitIssue::Stalled),
        }
    };
    FitResult {
        coefficients,
        converged: issue.is_none(),
        iterations: outcome.iterations,
        log_likelihood: outcome.log_likelihood,
        issue,
    }
}
