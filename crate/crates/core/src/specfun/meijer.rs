//! Incomplete Bessel moments `∫ y^{k+1} K1(y) dy` and the Meijer-G instance
//! `G^{2,1}_{1,3}(x | 1; (k+3)/2, (k+1)/2, 0)` that expresses them.
//!
//! Only differences of [`phi_meijer`] enter the BLER series, so it is
//! normalised as the moment from the origin:
//! `Φ_k(x) = ∫_0^{2√x} y^{k+1} K1(y) dy`.

use super::bessel::{k1_unchecked, one_minus_x_k1};
use super::quad::{integrate, QuadratureSpec};
use crate::error::{domain, Result};

// y^{k+1} K1(y) < 1e-300 beyond this for every order used here.
const NEGLIGIBLE_TAIL: f64 = 760.0;

fn moment_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 0.0,
        rel_tol: 1e-13,
        max_subdivisions: 2000,
    }
}

#[inline]
fn moment_integrand(y: f64, k: u32) -> f64 {
    if y <= 2.0 {
        // y^{k+1} K1(y) = y^k (y K1(y))
        y.powi(k as i32) * (1.0 - one_minus_x_k1(y))
    } else {
        y.powi(k as i32 + 1) * k1_unchecked(y)
    }
}

/// `∫_lo^hi y^{k+1} K1(y) dy` for `0 ≤ lo ≤ hi`.
pub fn bessel_moment(lo: f64, hi: f64, k: u32) -> Result<f64> {
    if !(lo >= 0.0) {
        return Err(domain("bessel_moment", lo, "lower limit >= 0"));
    }
    if !(hi >= lo) {
        return Err(domain("bessel_moment", hi, "upper limit >= lower limit"));
    }
    let hi = hi.min(NEGLIGIBLE_TAIL);
    if lo >= hi {
        return Ok(0.0);
    }
    integrate(|y| moment_integrand(y, k), lo, hi, &moment_spec())
}

/// `Φ_k(x)` for `x > 0`; see the module docs for the normalisation.
pub fn phi_meijer(x: f64, k: u32) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("phi_meijer", x, "x > 0"));
    }
    bessel_moment(0.0, 2.0 * x.sqrt(), k)
}

/// `Φ_k(x_hi) − Φ_k(x_lo)` for `0 ≤ x_lo ≤ x_hi`, integrated directly over
/// the corresponding `y`-interval instead of subtracting two moments.
pub fn phi_meijer_diff(x_hi: f64, x_lo: f64, k: u32) -> Result<f64> {
    if !(x_lo >= 0.0) {
        return Err(domain("phi_meijer_diff", x_lo, "x_lo >= 0"));
    }
    if !(x_hi >= x_lo) {
        return Err(domain("phi_meijer_diff", x_hi, "x_hi >= x_lo"));
    }
    bessel_moment(2.0 * x_lo.sqrt(), 2.0 * x_hi.sqrt(), k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_limits_give_zero() {
        assert_eq!(phi_meijer_diff(0.7, 0.7, 2).unwrap(), 0.0);
        assert_eq!(
            phi_meijer(0.7, 1).unwrap() - phi_meijer(0.7, 1).unwrap(),
            0.0
        );
    }

    #[test]
    fn complete_moments() {
        // ∫_0^∞ y^{k+1} K1(y) dy = 2^k Γ((k+1)/2) Γ((k+3)/2)
        let full = phi_meijer(1e6, 0).unwrap();
        assert!((full - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((phi_meijer(1e6, 1).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tail_positive_and_decreasing() {
        let full = phi_meijer(1e6, 0).unwrap();
        let mut prev = f64::INFINITY;
        for i in 1..40 {
            let t = i as f64 * 0.25;
            let tail = full - phi_meijer(t * t / 4.0, 0).unwrap();
            assert!(tail > 0.0 && tail < prev);
            prev = tail;
        }
    }

    #[test]
    fn domain() {
        assert!(phi_meijer(0.0, 0).is_err());
        assert!(phi_meijer(-1.0, 0).is_err());
        assert!(phi_meijer_diff(0.1, 0.2, 0).is_err());
    }
}
