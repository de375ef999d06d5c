//! Newton–Raphson maximisation shared by both fitters.

/// Convergence when the largest score component drops below this.
pub const SCORE_TOLERANCE: f64 = 1e-8;
/// ... or the relative change of the log-likelihood drops below this.
pub const LOGLIK_TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 50;
const MAX_HALVINGS: usize = 40;

/// A concave log-likelihood over a small number of parameters.
pub(crate) trait Objective {
    fn dim(&self) -> usize;

    /// Returns the log-likelihood and fills the score and the observed information
    /// (negative Hessian, row-major `dim x dim`).
    fn evaluate(&self, beta: &[f64], score: &mut [f64], information: &mut [f64]) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stop {
    Converged,
    MaxIterations,
    Singular,
    NoAscent,
}

#[derive(Debug, Clone)]
pub(crate) struct NewtonOutcome {
    pub beta: Vec<f64>,
    /// Inverse observed information at `beta`, when it could be computed.
    pub covariance: Option<Vec<f64>>,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub stop: Stop,
}

/// In-place Cholesky factorisation of a symmetric positive-definite matrix.
fn cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(sum > 0.0) || !sum.is_finite() {
                    return None;
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Some(l)
}

fn cholesky_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l[i * n + k] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= l[k * n + i] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    y
}

pub(crate) fn invert_spd(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let l = cholesky(a, n)?;
    let mut inv = vec![0.0; n * n];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = cholesky_solve(&l, n, &e);
        for i in 0..n {
            inv[i * n + j] = col[i];
        }
    }
    Some(inv)
}

/// Maximises `objective` from the origin with step-halving on likelihood decrease.
pub(crate) fn maximize<O: Objective>(objective: &O) -> NewtonOutcome {
    let n = objective.dim();
    let mut beta = vec![0.0; n];
    let mut score = vec![0.0; n];
    let mut information = vec![0.0; n * n];
    let mut ll = objective.evaluate(&beta, &mut score, &mut information);

    let mut trial_score = vec![0.0; n];
    let mut trial_information = vec![0.0; n * n];
    let mut stop = Stop::MaxIterations;
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS {
        if score.iter().all(|s| s.abs() < SCORE_TOLERANCE) {
            stop = Stop::Converged;
            break;
        }
        let Some(l) = cholesky(&information, n) else {
            stop = Stop::Singular;
            break;
        };
        let mut step = cholesky_solve(&l, n, &score);
        iterations += 1;

        let mut trial = vec![0.0; n];
        let mut trial_ll = f64::NEG_INFINITY;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            for i in 0..n {
                trial[i] = beta[i] + step[i];
            }
            trial_ll = objective.evaluate(&trial, &mut trial_score, &mut trial_information);
            if trial_ll.is_finite() && trial_ll >= ll {
                accepted = true;
                break;
            }
            step.iter_mut().for_each(|s| *s *= 0.5);
        }
        if !accepted {
            stop = Stop::NoAscent;
            break;
        }

        let change = (trial_ll - ll).abs() / ll.abs().max(f64::MIN_POSITIVE);
        beta.copy_from_slice(&trial);
        score.copy_from_slice(&trial_score);
        information.copy_from_slice(&trial_information);
        ll = trial_ll;
        if change < LOGLIK_TOLERANCE {
            stop = Stop::Converged;
            break;
        }
    }
    if stop == Stop::MaxIterations && score.iter().all(|s| s.abs() < SCORE_TOLERANCE) {
        stop = Stop::Converged;
    }

    NewtonOutcome {
        covariance: invert_spd(&information, n),
        beta,
        log_likelihood: ll,
        iterations,
        stop,
    }
}
