use twrn_core::mc::{estimate_sum_bler, estimate_sum_bler_with};
use twrn_core::{Execution, McSettings, PacketConfig, ScenarioConfig, Scheme};

fn settings(trials: u64) -> McSettings {
    McSettings {
        trials,
        seed: 2024,
        use_exact_snr: true,
    }
}

#[test]
fn symmetric_endpoints_agree() {
    let snr = ScenarioConfig::reference_geometry(30.0, 30.0, 30.0).average_snrs().unwrap();
    let packet = PacketConfig::new(256, 1200, Scheme::TwoSlot).unwrap();
    let r = estimate_sum_bler(&snr, &packet, None, &settings(400_000)).unwrap();
    let se = r.std_error.unwrap();
    assert!((r.psi_a - r.psi_b).abs() <= 3.0 * se, "{} {} {se}", r.psi_a, r.psi_b);
    assert_eq!(r.sum_bler, r.psi_a + r.psi_b);
}

#[test]
fn std_error_follows_square_root_law() {
    let snr = ScenarioConfig::reference_geometry(30.0, 40.0, 25.0).average_snrs().unwrap();
    let packet = PacketConfig::new(256, 1200, Scheme::TwoSlot).unwrap();
    let small = estimate_sum_bler(&snr, &packet, None, &settings(20_000)).unwrap();
    let large = estimate_sum_bler(&snr, &packet, None, &settings(2_000_000)).unwrap();
    let ratio = small.std_error.unwrap() / large.std_error.unwrap();
    assert!((ratio / 10.0 - 1.0).abs() <= 0.2, "ratio {ratio}");
}

#[test]
fn bit_identical_across_worker_counts() {
    let snr = ScenarioConfig::reference_geometry(35.0, 45.0, 30.0).average_snrs().unwrap();
    let packet = PacketConfig::new(256, 1200, Scheme::ThreeSlot).unwrap();
    let split = Some(twrn_core::analytic::optimal_power_split(&snr));
    let s = settings(250_001);
    let seq = estimate_sum_bler_with(&snr, &packet, split, &s, Execution::Sequential).unwrap();
    let par = estimate_sum_bler_with(&snr, &packet, split, &s, Execution::Parallel).unwrap();
    let pool = rayon_pool(3).install(|| estimate_sum_bler(&snr, &packet, split, &s).unwrap());
    for r in [par, pool] {
        assert_eq!(seq.psi_a.to_bits(), r.psi_a.to_bits());
        assert_eq!(seq.psi_b.to_bits(), r.psi_b.to_bits());
    }
}

#[cfg(feature = "parallel")]
fn rayon_pool(n: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()
}

#[cfg(not(feature = "parallel"))]
fn rayon_pool(_: usize) -> Inline {
    Inline
}

#[cfg(not(feature = "parallel"))]
struct Inline;

#[cfg(not(feature = "parallel"))]
impl Inline {
    fn install<R>(&self, f: impl FnOnce() -> R) -> R {
        f()
    }
}
