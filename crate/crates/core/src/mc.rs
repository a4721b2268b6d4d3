//! Seeded Monte Carlo estimation of the average block error probability from
//! the exact end-to-end SNR.
//!
//! Each trial draws two unit-mean exponential fade powers from a ChaCha8
//! stream positioned at `4 · trial_index` words, so a trial's draws depend
//! only on `(seed, endpoint, trial_index)`. Trials are reduced in fixed-size
//! chunks and the chunk partial sums are merged in chunk order, which makes
//! the estimate bit-identical for any number of workers.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::analytic::{BlerReport, Method};
use crate::channel::{instantaneous_snr, scheme_params, AvgLinkSnr, Endpoint, PowerSplit, SchemeParams, SnrForm};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::fbl::{conditional_bler, PacketConfig};

const CHUNK: u64 = 1 << 14;
// two u64 draws per trial = four 32-bit ChaCha words
const WORDS_PER_TRIAL: u128 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McSettings {
    pub trials: u64,
    pub seed: u64,
    /// Use `c h g / (a g + b h + 1)` rather than the high-SNR form.
    pub use_exact_snr: bool,
}

impl Default for McSettings {
    fn default() -> Self {
        McSettings {
            trials: 1_000_000,
            seed: 1,
            use_exact_snr: true,
        }
    }
}

impl McSettings {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Standard error of the mean (population variance over `trials`).
    pub std_error: f64,
    pub trials: u64,
}

/// Uniform in the open interval (0, 1).
#[inline]
fn open_uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

#[derive(Debug, Clone, Copy, Default)]
struct Partial {
    sum: f64,
    sum_sq: f64,
}

pub fn estimate_psi(params: &SchemeParams, packet: &PacketConfig, settings: &McSettings) -> Result<McEstimate> {
    estimate_psi_with(params, packet, settings, Execution::default())
}

/// [`estimate_psi`] with an explicit execution strategy.
pub fn estimate_psi_with(
    params: &SchemeParams,
    packet: &PacketConfig,
    settings: &McSettings,
    exec: Execution,
) -> Result<McEstimate> {
    settings.validate()?;
    packet.validate()?;
    if params.scheme != packet.scheme {
        return Err(Error::InvalidArgument(format!(
            "parameters are for {} but the packet uses {}",
            params.scheme, packet.scheme
        )));
    }
    let form = if settings.use_exact_snr {
        SnrForm::Exact
    } else {
        SnrForm::Approximate
    };
    let rate = packet.rate();
    let m_slot = packet.slot_len();
    let trials = settings.trials;
    let chunks = trials.div_ceil(CHUNK);

    let partials = map_indexed(chunks as usize, exec, |chunk| {
        let start = chunk as u64 * CHUNK;
        let end = (start + CHUNK).min(trials);
        let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
        rng.set_stream(params.endpoint.index());
        rng.set_word_pos(start as u128 * WORDS_PER_TRIAL);
        let mut acc = Partial::default();
        for _ in start..end {
            let h = -open_uniform(&mut rng).ln();
            let g = -open_uniform(&mut rng).ln();
            let gamma = instantaneous_snr(params, h, g, form);
            let e = conditional_bler(gamma, rate, m_slot);
            acc.sum += e;
            acc.sum_sq += e * e;
        }
        acc
    });

    let total = partials.iter().fold(Partial::default(), |a, p| Partial {
        sum: a.sum + p.sum,
        sum_sq: a.sum_sq + p.sum_sq,
    });
    let n = trials as f64;
    let mean = total.sum / n;
    let var = (total.sum_sq / n - mean * mean).max(0.0);
    Ok(McEstimate {
        mean,
        std_error: (var / n).sqrt(),
        trials,
    })
}

/// Monte Carlo sum-BLER. The two endpoints use distinct random streams.
pub fn estimate_sum_bler(
    snr: &AvgLinkSnr,
    packet: &PacketConfig,
    split: Option<PowerSplit>,
    settings: &McSettings,
) -> Result<BlerReport> {
    estimate_sum_bler_with(snr, packet, split, settings, Execution::default())
}

pub fn estimate_sum_bler_with(
    snr: &AvgLinkSnr,
    packet: &PacketConfig,
    split: Option<PowerSplit>,
    settings: &McSettings,
    exec: Execution,
) -> Result<BlerReport> {
    let mut est = [McEstimate {
        mean: 0.0,
        std_error: 0.0,
        trials: 0,
    }; 2];
    for (slot, endpoint) in Endpoint::BOTH.into_iter().enumerate() {
        let params = scheme_params(snr, packet.scheme, endpoint, split)?;
        est[slot] = estimate_psi_with(&params, packet, settings, exec)?;
    }
    Ok(BlerReport {
        psi_a: est[0].mean,
        psi_b: est[1].mean,
        sum_bler: est[0].mean + est[1].mean,
        method: Method::MonteCarlo(*settings),
        std_error: Some(est[0].std_error.hypot(est[1].std_error)),
        clamped: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Scheme;

    fn unit_params() -> SchemeParams {
        SchemeParams::new(1.0, 1.0, 1.0, Endpoint::A, Scheme::TwoSlot).unwrap()
    }

    fn settings(trials: u64) -> McSettings {
        McSettings {
            trials,
            seed: 7,
            use_exact_snr: true,
        }
    }

    #[test]
    fn very_high_snr_gives_no_errors() {
        let packet = PacketConfig::new(256, 1200, Scheme::TwoSlot).unwrap();
        let p = unit_params().scaled(1e6);
        let est = estimate_psi(&p, &packet, &settings(20_000)).unwrap();
        assert!(est.mean < 1e-4, "{}", est.mean);
    }

    #[test]
    fn vanishing_gain_gives_certain_error() {
        let packet = PacketConfig::new(256, 1200, Scheme::TwoSlot).unwrap();
        let p = SchemeParams::new(1.0, 1.0, 1e-12, Endpoint::A, Scheme::TwoSlot).unwrap();
        let est = estimate_psi(&p, &packet, &settings(10_000)).unwrap();
        assert!(est.mean > 1.0 - 1e-9);
    }

    #[test]
    fn deterministic_across_execution() {
        let packet = PacketConfig::new(128, 600, Scheme::TwoSlot).unwrap();
        let p = unit_params().scaled(30.0);
        let s = settings(100_003);
        let a = estimate_psi_with(&p, &packet, &s, Execution::Sequential).unwrap();
        let b = estimate_psi_with(&p, &packet, &s, Execution::Parallel).unwrap();
        let c = estimate_psi_with(&p, &packet, &s, Execution::Parallel).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        assert_eq!(b.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn prefix_of_longer_run_uses_same_draws() {
        // trial i's draws do not depend on the total trial count
        let packet = PacketConfig::new(128, 600, Scheme::TwoSlot).unwrap();
        let p = unit_params().scaled(30.0);
        let one = estimate_psi(&p, &packet, &settings(1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        rng.set_stream(0);
        let h = -open_uniform(&mut rng).ln();
        let g = -open_uniform(&mut rng).ln();
        let e = conditional_bler(instantaneous_snr(&p, h, g, SnrForm::Exact), packet.rate(), packet.slot_len());
        assert_eq!(one.mean, e);
    }

    #[test]
    fn std_error_bound() {
        let packet = PacketConfig::new(128, 600, Scheme::TwoSlot).unwrap();
        for trials in [1u64, 2, 10, 1000] {
            let est = estimate_psi(&unit_params(), &packet, &settings(trials)).unwrap();
            assert!(est.std_error <= 0.5 / (trials as f64).sqrt() + 1e-15);
            assert!(est.mean >= 0.0 && est.mean <= 1.0);
        }
    }

    #[test]
    fn exact_snr_never_beats_approximate() {
        let packet = PacketConfig::new(128, 600, Scheme::TwoSlot).unwrap();
        let p = unit_params().scaled(20.0);
        let exact = estimate_psi(&p, &packet, &settings(50_000)).unwrap();
        let approx = estimate_psi(
            &p,
            &packet,
            &McSettings {
                use_exact_snr: false,
                ..settings(50_000)
            },
        )
        .unwrap();
        assert!(exact.mean >= approx.mean);
    }

    #[test]
    fn rejects_bad_input() {
        let packet = PacketConfig::new(128, 600, Scheme::TwoSlot).unwrap();
        assert!(estimate_psi(&unit_params(), &packet, &settings(0)).is_err());
        let p3 = SchemeParams::new(1.0, 1.0, 1.0, Endpoint::A, Scheme::ThreeSlot).unwrap();
        assert!(estimate_psi(&p3, &packet, &settings(10)).is_err());
    }
}
