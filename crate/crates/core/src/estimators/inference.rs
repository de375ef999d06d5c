use statrs::function::erf::erfc;

use crate::error::EstimationError;

/// Two-sided Wald p-value of `log_effect / se` against the standard normal.
pub fn wald_p(log_effect: f64, se: f64) -> Result<f64, EstimationError> {
    if !(se > 0.0) {
        return Err(EstimationError::NonPositiveSe(se));
    }
    let z = (log_effect / se).abs();
    Ok(erfc(z / std::f64::consts::SQRT_2).clamp(0.0, 1.0))
}
