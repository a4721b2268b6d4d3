//! Principal branch of the Lambert W function.

use std::f64::consts::E;

use crate::error::{domain, Result};

const BRANCH_POINT: f64 = -1.0 / E;

/// `W0(x)`: the solution `w ≥ -1` of `w e^w = x`, for `x ≥ -1/e`.
///
/// Halley iteration from a branch-point series guess near `-1/e` and a
/// logarithmic guess elsewhere.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() || x < BRANCH_POINT {
        return Err(domain("lambert_w0", x, "x >= -1/e"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    // within rounding of the branch point
    let p2 = 2.0 * (E * x + 1.0);
    if p2 <= 4.0 * f64::EPSILON {
        return Ok(-1.0);
    }

    let mut w = if x < -0.25 {
        let p = p2.sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        // ln(1+x) is exact at 0 and within ~30% up to e
        (1.0 + x).ln() * 0.8_f64.max(1.0 - x * 0.07)
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };

    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-300 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        let next = w - step;
        if !next.is_finite() {
            break;
        }
        let done = (next - w).abs() <= 4.0 * f64::EPSILON * (1.0 + next.abs());
        w = next.max(-1.0);
        if done {
            break;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Newton on w e^w - x = 0, started from a bracket-safe point.
    fn newton_oracle(x: f64) -> f64 {
        let mut w: f64 = if x > 1.0 { x.ln() } else { 0.0 };
        for _ in 0..200 {
            let f = w * w.exp() - x;
            w -= f / (w.exp() * (w + 1.0));
        }
        w
    }

    #[test]
    fn exact_points() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert!((lambert_w0(E).unwrap() - 1.0).abs() < 1e-15);
        assert!((lambert_w0(BRANCH_POINT).unwrap() + 1.0).abs() < 1e-7);
    }

    #[test]
    fn omega_constant() {
        let w = lambert_w0(1.0).unwrap();
        assert!((w - 0.567_143).abs() < 1e-6);
        assert!((w - newton_oracle(1.0)).abs() < 1e-9);
    }

    #[test]
    fn defining_identity() {
        for &x in &[-0.3, 0.0, 0.5, 1.0, E, 10.0, 1e6, -0.36, 1e-8, 1e300] {
            let w = lambert_w0(x).unwrap();
            assert!(w >= -1.0);
            let r = (w * w.exp() - x).abs();
            assert!(r <= 1e-12 * x.abs().max(1.0), "x = {x}: residual {r}");
        }
    }

    #[test]
    fn below_branch_point_rejected() {
        assert!(lambert_w0(-0.4).is_err());
        assert!(lambert_w0(f64::NAN).is_err());
    }
}
