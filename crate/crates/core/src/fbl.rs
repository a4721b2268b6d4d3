//! Finite-blocklength primitives: capacity, dispersion, the normal
//! approximation of the block error probability, and its piecewise-linear
//! surrogate in the SNR.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::channel::Scheme;
use crate::error::{Error, Result};
use crate::specfun::q_unchecked;

/// Per-slot blocklength below which the normal approximation is loose.
pub const MIN_TIGHT_SLOT_LEN: u32 = 100;

/// Payload, total blocklength and schedule of one packet exchange.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketConfig {
    /// information bits per source
    pub sigma: u32,
    /// channel uses per exchange
    pub m: u32,
    pub scheme: Scheme,
}

impl PacketConfig {
    /// Rejects `m` that does not split into whole slots.
    pub fn new(sigma: u32, m: u32, scheme: Scheme) -> Result<Self> {
        let packet = PacketConfig { sigma, m, scheme };
        packet.validate()?;
        if packet.is_short_slot() {
            log::warn!(
                "slot length {} < {} channel uses: normal approximation may be loose",
                packet.m / scheme.slots(),
                MIN_TIGHT_SLOT_LEN
            );
        }
        Ok(packet)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sigma == 0 {
            return Err(Error::InvalidArgument("sigma must be at least 1 bit".into()));
        }
        let tau = self.scheme.slots();
        if self.m == 0 || !self.m.is_multiple_of(tau) {
            return Err(Error::InvalidArgument(format!(
                "blocklength m = {} is not a positive multiple of {} ({} slots)",
                self.m, tau, self.scheme
            )));
        }
        Ok(())
    }

    /// Same payload and blocklength under another schedule.
    pub fn with_scheme(&self, scheme: Scheme) -> Result<Self> {
        PacketConfig::new(self.sigma, self.m, scheme)
    }

    /// Channel uses per slot, `m / τ`.
    pub fn slot_len(&self) -> f64 {
        (self.m / self.scheme.slots()) as f64
    }

    /// Coding rate per slot, `σ / m_τ` bits per channel use.
    pub fn rate(&self) -> f64 {
        self.sigma as f64 / self.slot_len()
    }

    pub fn is_short_slot(&self) -> bool {
        self.m / self.scheme.slots() < MIN_TIGHT_SLOT_LEN
    }
}

/// Knees of the piecewise-linear surrogate of the error kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearQApprox {
    pub vartheta: f64,
    /// SNR at which the kernel equals 1/2
    pub theta: f64,
    /// lower knee (kernel = 1 below), floored at 0
    pub zeta: f64,
    /// upper knee (kernel = 0 above)
    pub xi: f64,
    pub m_slot: f64,
}

impl LinearQApprox {
    /// Slope magnitude `ϑ √m_τ` of the linear segment.
    pub fn slope(&self) -> f64 {
        self.vartheta * self.m_slot.sqrt()
    }
}

fn log2_e_sq() -> f64 {
    let l = 1.0 / LN_2;
    l * l
}

/// Shannon capacity `log2(1 + γ)`.
pub fn capacity(gamma: f64) -> f64 {
    gamma.ln_1p() / LN_2
}

/// Channel dispersion `(1 − (1+γ)^{−2}) (log2 e)²`.
pub fn dispersion(gamma: f64) -> f64 {
    let one_plus = 1.0 + gamma;
    let factor = if gamma < 1.0 {
        // γ(2+γ)/(1+γ)², free of cancellation near zero
        gamma * (2.0 + gamma) / (one_plus * one_plus)
    } else {
        1.0 - (one_plus * one_plus).recip()
    };
    factor * log2_e_sq()
}

/// Normal-approximation block error probability at SNR `gamma`, rate `r`
/// and `m_slot` channel uses. Equals 1 at `gamma = 0`.
pub fn conditional_bler(gamma: f64, r: f64, m_slot: f64) -> f64 {
    if !(gamma > 0.0) {
        return 1.0;
    }
    let v = dispersion(gamma);
    if v == 0.0 {
        return 1.0;
    }
    q_unchecked((capacity(gamma) - r) / (v / m_slot).sqrt())
}

/// Knees of the linear surrogate for rate `r > 0` and `m_slot ≥ 1`.
pub fn linear_q_params(r: f64, m_slot: f64) -> Result<LinearQApprox> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("rate must be positive, got {r}")));
    }
    if !(m_slot >= 1.0 && m_slot.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "slot length must be at least 1, got {m_slot}"
        )));
    }
    let vartheta = 1.0 / (2.0 * PI * (2f64.powf(2.0 * r) - 1.0).sqrt());
    let theta = 2f64.powf(r) - 1.0;
    let half_width = 1.0 / (2.0 * vartheta * m_slot.sqrt());
    if !(vartheta > 0.0 && theta.is_finite() && half_width.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "rate {r} too large for double-precision knees"
        )));
    }
    Ok(LinearQApprox {
        vartheta,
        theta,
        zeta: (theta - half_width).max(0.0),
        xi: theta + half_width,
        m_slot,
    })
}

/// The surrogate kernel: 1 below `zeta`, 0 above `xi`, linear in between.
pub fn xi_piecewise(gamma: f64, p: &LinearQApprox) -> f64 {
    if gamma <= p.zeta {
        1.0
    } else if gamma >= p.xi {
        0.0
    } else {
        (0.5 - p.slope() * (gamma - p.theta)).clamp(0.0, 1.0)
    }
}
