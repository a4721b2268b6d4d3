//! Gaussian tail probability.

use crate::error::{domain, Result};

/// Gaussian Q-function, `Q(x) = P(N(0,1) > x)`.
///
/// Evaluated through `erfc`, so both tails keep full relative precision:
/// `Q(-x)` is computed as `erfc(-x/√2)/2` rather than `1 - Q(x)`.
pub fn q_function(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain("q_function", x, "finite"));
    }
    Ok(q_unchecked(x))
}

/// Q-function without the finiteness check. `±∞` map to 0 and 1.
#[inline]
pub(crate) fn q_unchecked(x: f64) -> f64 {
    0.5 * libm::erfc(x * std::f64::consts::FRAC_1_SQRT_2)
}
