//! Special functions against independent numerical oracles.

use proptest::prelude::*;
use twrn_core::specfun::{bessel_k1, integrate, lambert_w0, phi_meijer, phi_meijer_diff, q_function, QuadratureSpec};

/// K1 from its integral representation, trapezoid rule in t.
fn k1_oracle(x: f64) -> f64 {
    let h = 1.0 / 128.0;
    let mut sum = 0.5 * (-x).exp();
    let mut i = 1;
    loop {
        let t = i as f64 * h;
        let v = (-x * t.cosh()).exp() * t.cosh();
        sum += v;
        if v == 0.0 || (t > 1.0 && v < 1e-18 * sum) {
            break;
        }
        i += 1;
    }
    sum * h
}

/// ∫_lo^hi y^{k+1} K1(y) dy by composite 16-point Gauss–Legendre on fixed panels,
/// with the substitution y = lo + (hi-lo) s² near the origin to absorb the log term.
fn moment_oracle(lo: f64, hi: f64, k: i32) -> f64 {
    // nodes/weights of 8-point Gauss–Legendre on [-1, 1] (symmetric half)
    const X: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
    const W: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];
    let f = |s: f64| {
        let y = lo + (hi - lo) * s * s;
        let jac = 2.0 * (hi - lo) * s;
        if y == 0.0 {
            return 0.0;
        }
        y.powi(k + 1) * k1_oracle(y) * jac
    };
    let panels = 64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = p as f64 / panels as f64;
        let b = (p + 1) as f64 / panels as f64;
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        for j in 0..4 {
            total += W[j] * (f(c - h * X[j]) + f(c + h * X[j])) * h;
        }
    }
    total
}

#[test]
fn q_function_reference_point() {
    // Gaussian tail by quadrature of the density
    let spec = QuadratureSpec::default();
    let tail = integrate(
        |t| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt(),
        1.96,
        40.0,
        &spec,
    )
    .unwrap();
    let q = q_function(1.96).unwrap();
    assert!((q - 0.0250).abs() < 1e-4);
    assert!((q - tail).abs() < 1e-12);
}

#[test]
fn k1_reference_points() {
    assert!((bessel_k1(1.0).unwrap() - k1_oracle(1.0)).abs() < 1e-12);
    assert!((bessel_k1(1.0).unwrap() - 0.601907).abs() < 1e-6);
    let k10 = bessel_k1(10.0).unwrap();
    assert!((k10 - 1.8649e-5).abs() < 1e-9);
    assert!((k10 / k1_oracle(10.0) - 1.0).abs() < 1e-10);
}

#[test]
fn phi_meijer_differences_match_moment_quadrature() {
    // 20 deterministic pseudo-random intervals per order
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for k in 0..=3u32 {
        for _ in 0..20 {
            let y1 = 6.0 * next().powi(2) + 1e-4;
            let y2 = 6.0 * next().powi(2) + 1e-4;
            let (lo, hi) = if y1 < y2 { (y1, y2) } else { (y2, y1) };
            let (x_lo, x_hi) = (lo * lo / 4.0, hi * hi / 4.0);
            let want = moment_oracle(lo, hi, k as i32);
            let by_diff = phi_meijer(x_hi, k).unwrap() - phi_meijer(x_lo, k).unwrap();
            let direct = phi_meijer_diff(x_hi, x_lo, k).unwrap();
            assert!((by_diff - want).abs() <= 1e-5 * want.abs(), "k={k} [{lo},{hi}]: {by_diff} vs {want}");
            assert!((direct - want).abs() <= 1e-9 * want.abs(), "k={k} [{lo},{hi}]: {direct} vs {want}");
        }
    }
}

proptest! {
    #[test]
    fn lambert_identity(x in -0.3678794411714423f64..1e8) {
        let w = lambert_w0(x).unwrap();
        prop_assert!(w >= -1.0);
        prop_assert!((w * w.exp() - x).abs() <= 1e-12 * x.abs().max(1.0));
    }

    #[test]
    fn q_symmetry(x in -37.0f64..37.0) {
        let s = q_function(x).unwrap() + q_function(-x).unwrap();
        prop_assert!((s - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn k1_positive_decreasing(x in 1e-3f64..50.0, dx in 1e-6f64..1.0) {
        let a = bessel_k1(x).unwrap();
        let b = bessel_k1(x + dx).unwrap();
        prop_assert!(a > 0.0 && b > 0.0 && b < a);
    }
}
