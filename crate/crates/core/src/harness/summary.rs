//! Performance criteria over replications: bias, MSE and power with Monte-Carlo errors.

use statrs::distribution::{Beta, ContinuousCDF};

use crate::error::EstimationError;

/// Two-sided 95% normal quantile.
pub const Z_975: f64 = 1.959_963_984_540_054;

/// Clopper–Pearson interval for a binomial proportion.
pub fn exact_binomial_ci(
    successes: u64,
    n: u64,
    level: f64,
) -> Result<(f64, f64), EstimationError> {
    if n == 0 || successes > n {
        return Err(EstimationError::InvalidCounts {
            successes,
            trials: n,
        });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(EstimationError::InvalidLevel(level));
    }
    let tail = (1.0 - level) / 2.0;
    let (x, n) = (successes as f64, n as f64);
    let low = if successes == 0 {
        0.0
    } else {
        Beta::new(x, n - x + 1.0)
            .expect("positive shape parameters")
            .inverse_cdf(tail)
    };
    let high = if successes as f64 == n {
        1.0
    } else {
        Beta::new(x + 1.0, n - x)
            .expect("positive shape parameters")
            .inverse_cdf(1.0 - tail)
    };
    Ok((low, high))
}

/// Performance of one (scenario, method, dose) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSummary {
    pub n_converged: usize,
    pub n_failed: usize,
    /// Mean of `estimate - truth`.
    pub bias: f64,
    pub se_bias: f64,
    pub bias_ci: (f64, f64),
    pub mse: f64,
    pub se_mse: f64,
    pub power: f64,
    pub power_ci: (f64, f64),
}

impl CellSummary {
    /// Row for a cell with fewer than two converged fits.
    pub fn undefined(n_converged: usize, n_failed: usize) -> Self {
        Self {
            n_converged,
            n_failed,
            bias: f64::NAN,
            se_bias: f64::NAN,
            bias_ci: (f64::NAN, f64::NAN),
            mse: f64::NAN,
            se_mse: f64::NAN,
            power: f64::NAN,
            power_ci: (f64::NAN, f64::NAN),
        }
    }
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Summarises converged fits of one cell.
///
/// `estimates` are ratio-scale estimates and `p_values` their Wald p-values, both from
/// converged fits only; `n_failed` counts the excluded fits. Bias is `estimate - true_rr`.
pub fn summarize_cell(
    estimates: &[f64],
    p_values: &[f64],
    n_failed: usize,
    true_rr: f64,
    alpha: f64,
) -> Result<CellSummary, EstimationError> {
    assert_eq!(estimates.len(), p_values.len());
    if estimates.len() < 2 {
        return Err(EstimationError::TooFewReplications {
            needed: 2,
            got: estimates.len(),
        });
    }
    let errors: Vec<f64> = estimates.iter().map(|e| e - true_rr).collect();
    let squared: Vec<f64> = errors.iter().map(|e| e * e).collect();
    let (bias, se_bias) = mean_and_se(&errors);
    let (mse, se_mse) = mean_and_se(&squared);
    let rejections = p_values.iter().filter(|&&p| p < alpha).count();
    let n = estimates.len();
    Ok(CellSummary {
        n_converged: n,
        n_failed,
        bias,
        se_bias,
        bias_ci: (bias - Z_975 * se_bias, bias + Z_975 * se_bias),
        mse,
        se_mse,
        power: rejections as f64 / n as f64,
        power_ci: exact_binomial_ci(rejections as u64, n as u64, 0.95)?,
    })
}
