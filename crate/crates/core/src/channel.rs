//! Deployment geometry, average link SNRs, the per-endpoint SNR
//! parameterisation of both exchange schedules, and the end-to-end SNR.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{k0_unchecked, k1_unchecked, one_minus_x_k1};

/// Exchange schedule: two or three time slots per packet exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "2TS")]
    TwoSlot,
    #[serde(rename = "3TS")]
    ThreeSlot,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::TwoSlot, Scheme::ThreeSlot];

    /// Number of time slots `τ`.
    pub fn slots(self) -> u32 {
        match self {
            Scheme::TwoSlot => 2,
            Scheme::ThreeSlot => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Scheme::TwoSlot => "2TS",
            Scheme::ThreeSlot => "3TS",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "2TS" | "2" => Ok(Scheme::TwoSlot),
            "3TS" | "3" => Ok(Scheme::ThreeSlot),
            _ => Err(Error::InvalidArgument(format!(
                "unknown scheme {s:?} (expected 2TS or 3TS)"
            ))),
        }
    }
}

/// Receiving source node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Endpoint {
    A,
    B,
}

impl Endpoint {
    pub const BOTH: [Endpoint; 2] = [Endpoint::A, Endpoint::B];

    pub(crate) fn index(self) -> u64 {
        match self {
            Endpoint::A => 0,
            Endpoint::B => 1,
        }
    }
}

/// Physical deployment. Powers in dBm, distances in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub p_a_dbm: f64,
    pub p_b_dbm: f64,
    pub p_r_dbm: f64,
    pub n_a_dbm: f64,
    pub n_b_dbm: f64,
    pub n_r_dbm: f64,
    pub d_ar: f64,
    pub d_br: f64,
    pub omega: f64,
}

impl ScenarioConfig {
    /// Relay midway between sources 100 m apart, path-loss exponent 3 and
    /// −80 dBm noise at every node, with the given transmit powers.
    pub fn reference_geometry(p_a_dbm: f64, p_b_dbm: f64, p_r_dbm: f64) -> Self {
        ScenarioConfig {
            p_a_dbm,
            p_b_dbm,
            p_r_dbm,
            n_a_dbm: -80.0,
            n_b_dbm: -80.0,
            n_r_dbm: -80.0,
            d_ar: 50.0,
            d_br: 50.0,
            omega: 3.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let powers = [
            ("p_a_dbm", self.p_a_dbm),
            ("p_b_dbm", self.p_b_dbm),
            ("p_r_dbm", self.p_r_dbm),
            ("n_a_dbm", self.n_a_dbm),
            ("n_b_dbm", self.n_b_dbm),
            ("n_r_dbm", self.n_r_dbm),
        ];
        for (name, v) in powers {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite, got {v}")));
            }
        }
        for (name, d) in [("d_ar", self.d_ar), ("d_br", self.d_br)] {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be a positive distance, got {d}"
                )));
            }
        }
        if !(2.0..=5.0).contains(&self.omega) {
            return Err(Error::InvalidArgument(format!(
                "omega must lie in [2, 5], got {}",
                self.omega
            )));
        }
        Ok(())
    }

    pub fn average_snrs(&self) -> Result<AvgLinkSnr> {
        average_snrs(self)
    }
}

/// Average SNRs of the four links (linear scale).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AvgLinkSnr {
    /// A → R
    pub g_ar: f64,
    /// B → R
    pub g_br: f64,
    /// R → A
    pub g_ra: f64,
    /// R → B
    pub g_rb: f64,
}

impl AvgLinkSnr {
    pub fn new(g_ar: f64, g_br: f64, g_ra: f64, g_rb: f64) -> Result<Self> {
        let snr = AvgLinkSnr {
            g_ar,
            g_br,
            g_ra,
            g_rb,
        };
        snr.validate()?;
        Ok(snr)
    }

    pub fn validate(&self) -> Result<()> {
        for v in [self.g_ar, self.g_br, self.g_ra, self.g_rb] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain("AvgLinkSnr", v, "positive and finite"));
            }
        }
        Ok(())
    }

    /// All four SNRs multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        AvgLinkSnr {
            g_ar: self.g_ar * k,
            g_br: self.g_br * k,
            g_ra: self.g_ra * k,
            g_rb: self.g_rb * k,
        }
    }
}

/// Relay power fractions for the A and B signals in the three-slot schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    pub alpha_sq: f64,
    pub beta_sq: f64,
}

impl PowerSplit {
    /// Split with `α² = alpha_sq`, `β² = 1 − α²`; `alpha_sq` must lie in `(0, 1)`.
    pub fn new(alpha_sq: f64) -> Result<Self> {
        if !(alpha_sq > 0.0 && alpha_sq < 1.0) {
            return Err(domain("PowerSplit", alpha_sq, "alpha_sq in (0, 1)"));
        }
        Ok(PowerSplit {
            alpha_sq,
            beta_sq: 1.0 - alpha_sq,
        })
    }

    pub fn even() -> Self {
        PowerSplit {
            alpha_sq: 0.5,
            beta_sq: 0.5,
        }
    }
}

/// SNR-combination constants `(a, b, c)` of one endpoint under one schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub endpoint: Endpoint,
    pub scheme: Scheme,
}

impl SchemeParams {
    pub fn new(a: f64, b: f64, c: f64, endpoint: Endpoint, scheme: Scheme) -> Result<Self> {
        for v in [a, b, c] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain("SchemeParams", v, "positive and finite"));
            }
        }
        Ok(SchemeParams {
            a,
            b,
            c,
            endpoint,
            scheme,
        })
    }

    /// Same parameters with every average SNR scaled by `k`
    /// (`a`, `b` are linear in the SNRs, `c` quadratic).
    pub fn scaled(&self, k: f64) -> Self {
        SchemeParams {
            a: self.a * k,
            b: self.b * k,
            c: self.c * k * k,
            ..*self
        }
    }

    /// `(a + b) / c`, the high-SNR outage slope of this endpoint.
    pub fn outage_slope(&self) -> f64 {
        (self.a + self.b) / self.c
    }
}

/// Which form of the end-to-end SNR to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SnrForm {
    /// `c h g / (a g + b h + 1)`
    Exact,
    /// `c h g / (a g + b h)`, the high-SNR form with a closed-form CDF.
    Approximate,
}

/// Converts dBm to watts.
pub fn dbm_to_linear(x_dbm: f64) -> f64 {
    10f64.powf((x_dbm - 30.0) / 10.0)
}

/// Average channel power gain `10⁻³ / (1 + d^ω)`: 30 dB attenuation at 1 m.
pub fn path_gain(d: f64, omega: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(domain("path_gain", d, "d > 0"));
    }
    Ok(1e-3 / (1.0 + d.powf(omega)))
}

pub fn average_snrs(cfg: &ScenarioConfig) -> Result<AvgLinkSnr> {
    cfg.validate()?;
    let gain_a = path_gain(cfg.d_ar, cfg.omega)?;
    let gain_b = path_gain(cfg.d_br, cfg.omega)?;
    let p_a = dbm_to_linear(cfg.p_a_dbm);
    let p_b = dbm_to_linear(cfg.p_b_dbm);
    let p_r = dbm_to_linear(cfg.p_r_dbm);
    AvgLinkSnr::new(
        p_a * gain_a / dbm_to_linear(cfg.n_r_dbm),
        p_b * gain_b / dbm_to_linear(cfg.n_r_dbm),
        p_r * gain_a / dbm_to_linear(cfg.n_a_dbm),
        p_r * gain_b / dbm_to_linear(cfg.n_b_dbm),
    )
}

/// `(a, b, c)` for `endpoint` under `scheme`. The three-slot schedule needs a
/// relay power split; the two-slot schedule must not be given one.
pub fn scheme_params(
    snr: &AvgLinkSnr,
    scheme: Scheme,
    endpoint: Endpoint,
    split: Option<PowerSplit>,
) -> Result<SchemeParams> {
    let AvgLinkSnr {
        g_ar,
        g_br,
        g_ra,
        g_rb,
    } = *snr;
    let (a, b, c) = match (scheme, split) {
        (Scheme::TwoSlot, None) => match endpoint {
            Endpoint::A => (g_ra + g_ar, g_br, g_ra * g_br),
            Endpoint::B => (g_rb + g_br, g_ar, g_rb * g_ar),
        },
        (Scheme::ThreeSlot, Some(PowerSplit { alpha_sq, beta_sq })) => match endpoint {
            Endpoint::A => (g_ra + beta_sq * g_ar, alpha_sq * g_br, alpha_sq * g_ra * g_br),
            Endpoint::B => (g_rb + alpha_sq * g_br, beta_sq * g_ar, beta_sq * g_rb * g_ar),
        },
        (Scheme::TwoSlot, Some(_)) => {
            return Err(Error::InvalidArgument(
                "the two-slot scheme takes no power split".into(),
            ))
        }
        (Scheme::ThreeSlot, None) => {
            return Err(Error::InvalidArgument(
                "the three-slot scheme requires a power split".into(),
            ))
        }
    };
    SchemeParams::new(a, b, c, endpoint, scheme)
}

/// End-to-end SNR for the fade powers `h` and `g` of the two hops.
pub fn instantaneous_snr(params: &SchemeParams, h: f64, g: f64, form: SnrForm) -> f64 {
    let num = params.c * h * g;
    if num == 0.0 {
        return 0.0;
    }
    let den = params.a * g + params.b * h;
    match form {
        SnrForm::Exact => num / (den + 1.0),
        SnrForm::Approximate => num / den,
    }
}

/// CDF of the approximate end-to-end SNR:
/// `F(x) = 1 − y e^{−x(a+b)/c} K1(y)` with `y = 2√(ab) x / c`.
///
/// Small values are evaluated as `(1 − e^{−λy}) + e^{−λy}(1 − y K1(y))`,
/// `λ = (a+b)/(2√(ab))`, so both terms are nonnegative and keep full
/// relative precision.
pub fn snr_cdf_approx(params: &SchemeParams, x: f64) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    let root_ab = (params.a * params.b).sqrt();
    let y = 2.0 * root_ab * x / params.c;
    let decay = x * (params.a + params.b) / params.c;
    let e = (-decay).exp();
    let survival = e * y * k1_unchecked(y);
    let f = if survival < 0.5 {
        1.0 - survival
    } else {
        -(-decay).exp_m1() + e * one_minus_x_k1(y)
    };
    f.clamp(0.0, 1.0)
}

/// Density of the approximate end-to-end SNR (derivative of [`snr_cdf_approx`]).
pub fn snr_pdf_approx(params: &SchemeParams, x: f64) -> f64 {
    if !(x > 0.0) || x.is_infinite() {
        return 0.0;
    }
    // (y K1)' = −y K0
    let root_ab = (params.a * params.b).sqrt();
    let scale = 2.0 * root_ab / params.c;
    let y = scale * x;
    let lambda = (params.a + params.b) / (2.0 * root_ab);
    let k1 = k1_unchecked(y);
    let k0 = k0_unchecked(y);
    let e = (-lambda * y).exp();
    (e * (y * k0 + lambda * y * k1) * scale).max(0.0)
}
