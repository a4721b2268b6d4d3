//! Modified Bessel function of the second kind, order one.
//!
//! Two regimes meet at `x = 2`: the ascending series (through `I1` and
//! digamma-weighted terms) below, and Steed's continued fraction for the
//! ratio `K1/K0` above. Both converge to machine precision.

use std::f64::consts::PI;

use crate::error::{domain, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 2.0;
const MAX_ITER: usize = 10_000;

/// `K1(x)` for `x > 0`.
pub fn bessel_k1(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(domain("bessel_k1", x, "x > 0"));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(k1_unchecked(x))
}

#[inline]
pub(crate) fn k1_unchecked(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        let (sum_i, sum_psi) = ascending_sums(x);
        1.0 / x + 0.5 * x * (0.5 * x).ln() * sum_i - 0.25 * x * sum_psi
    } else {
        steed_cf(x).1 * (-x).exp()
    }
}

/// `K0(x)` for `x > 0`; only needed for the SNR density.
pub(crate) fn k0_unchecked(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        // K0 = −(ln(x/2) + γ) I0 + Σ_{k≥1} H_k t^k/(k!)², t = x²/4
        let t = 0.25 * x * x;
        let mut term = 1.0;
        let mut harmonic = 0.0;
        let mut sum_i0 = 1.0;
        let mut sum_h = 0.0;
        for k in 1..MAX_ITER {
            let kf = k as f64;
            term *= t / (kf * kf);
            harmonic += 1.0 / kf;
            sum_i0 += term;
            sum_h += harmonic * term;
            if term < f64::EPSILON * sum_i0 {
                break;
            }
        }
        -((0.5 * x).ln() + EULER_GAMMA) * sum_i0 + sum_h
    } else {
        steed_cf(x).0 * (-x).exp()
    }
}

/// `1 - x K1(x)` for `x ≥ 0`, without cancellation for small `x`.
///
/// `x K1(x)` decreases from 1 at the origin towards 0, so the result lies in
/// `[0, 1)`. Near the origin it behaves like `-(x²/2) ln(x/2)`.
pub fn one_minus_x_k1(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    if x <= SERIES_LIMIT {
        let (sum_i, sum_psi) = ascending_sums(x);
        let x2 = x * x;
        -0.5 * x2 * (0.5 * x).ln() * sum_i + 0.25 * x2 * sum_psi
    } else {
        1.0 - x * k1_unchecked(x)
    }
}

/// Returns `(Σ t^k/(k!(k+1)!), Σ (ψ(k+1)+ψ(k+2)) t^k/(k!(k+1)!))` with `t = x²/4`.
fn ascending_sums(x: f64) -> (f64, f64) {
    let t = 0.25 * x * x;
    let mut term = 1.0;
    let mut psi_k1 = -EULER_GAMMA; // ψ(k+1)
    let mut psi_k2 = 1.0 - EULER_GAMMA; // ψ(k+2)
    let mut sum_i = term;
    let mut sum_psi = (psi_k1 + psi_k2) * term;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        term *= t / (kf * (kf + 1.0));
        psi_k1 += 1.0 / kf;
        psi_k2 += 1.0 / (kf + 1.0);
        sum_i += term;
        let d = (psi_k1 + psi_k2) * term;
        sum_psi += d;
        if term < f64::EPSILON * sum_i && d.abs() < f64::EPSILON * sum_psi.abs() {
            break;
        }
    }
    (sum_i, sum_psi)
}

/// `(e^x K0(x), e^x K1(x))` via Steed's method (continued fraction CF2),
/// valid for `x ≳ 2`.
fn steed_cf(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            break;
        }
    }
    h *= a1;
    let k0_scaled = (PI / (2.0 * x)).sqrt() / s;
    (k0_scaled, k0_scaled * (x + 0.5 - h) / x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // K1(x) = ∫_0^∞ exp(-x cosh t) cosh t dt, trapezoid rule (spectrally
    // accurate for this doubly-decaying integrand).
    fn k1_integral(x: f64) -> f64 {
        let h = 1.0 / 64.0;
        let mut sum = 0.5 * (-x).exp();
        let mut i = 1;
        loop {
            let t = i as f64 * h;
            let v = (-x * t.cosh()).exp() * t.cosh();
            sum += v;
            if v < 1e-300 || (v < sum * 1e-18 && t > 1.0) {
                break;
            }
            i += 1;
        }
        sum * h
    }

    #[test]
    fn reference_values() {
        // Frozen from the integral-representation oracle.
        assert!((bessel_k1(1.0).unwrap() - 0.601_907).abs() < 1e-6);
        let k10 = bessel_k1(10.0).unwrap();
        assert!((k10 - 1.8649e-5).abs() < 1e-9);
        assert_relative_eq!(k10, 1.864_877_345_382_558e-5, max_relative = 1e-12);
        assert_relative_eq!(bessel_k1(1.0).unwrap(), 0.601_907_230_197_234_6, max_relative = 1e-14);
    }

    #[test]
    fn matches_integral_representation() {
        for &x in &[0.01, 0.1, 0.5, 1.0, 1.5, 1.999, 2.0, 2.001, 3.0, 5.0, 10.0, 20.0, 50.0] {
            let want = k1_integral(x);
            assert_relative_eq!(bessel_k1(x).unwrap(), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn k0_matches_integral_representation() {
        fn k0_integral(x: f64) -> f64 {
            let h = 1.0 / 64.0;
            let mut sum = 0.5 * (-x).exp();
            for i in 1..4000 {
                sum += (-x * (i as f64 * h).cosh()).exp();
            }
            sum * h
        }
        for &x in &[0.05, 0.7, 2.0, 2.5, 9.0] {
            assert_relative_eq!(k0_unchecked(x), k0_integral(x), max_relative = 1e-12);
        }
    }

    #[test]
    fn small_argument_limit() {
        for &x in &[1e-3, 1e-6, 1e-10] {
            assert!((x * bessel_k1(x).unwrap() - 1.0).abs() < 10.0 * x * x * (1.0 / x).ln() + 1e-15);
        }
    }

    #[test]
    fn positive_and_log_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..=2000 {
            let x = i as f64 * 0.01;
            let k = bessel_k1(x).unwrap();
            assert!(k > 0.0);
            assert!(k.ln() < prev, "not decreasing at {x}");
            prev = k.ln();
        }
    }

    #[test]
    fn one_minus_x_k1_consistent() {
        for &x in &[0.05, 0.5, 1.0, 1.9, 2.5, 8.0] {
            assert_relative_eq!(one_minus_x_k1(x), 1.0 - x * k1_integral(x), max_relative = 1e-11);
        }
        // leading-order behaviour near the origin
        let x = 1e-6_f64;
        let lead = -0.5 * x * x * ((0.5 * x).ln() + EULER_GAMMA - 0.5);
        assert_relative_eq!(one_minus_x_k1(x), lead, max_relative = 1e-9);
        assert_eq!(one_minus_x_k1(0.0), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_k1(0.0).is_err());
        assert!(bessel_k1(-1.0).is_err());
        assert!(bessel_k1(f64::NAN).is_err());
    }
}
