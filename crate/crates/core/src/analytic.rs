//! Average block error probability of each endpoint (quadrature and series
//! forms), sum-BLER, and the high-SNR results built on it: optimal relay
//! power split, throughput-optimal payload, minimum blocklength, and the
//! critical blocklength separating the two schedules.

use std::f64::consts::{E, LN_2};

use serde::{Deserialize, Serialize};

use crate::channel::{scheme_params, AvgLinkSnr, Endpoint, PowerSplit, Scheme, SchemeParams, snr_cdf_approx};
use crate::error::{Error, Result};
use crate::fbl::{linear_q_params, LinearQApprox, PacketConfig};
use crate::mc::{self, McSettings};
use crate::specfun::{integrate, lambert_w0, phi_meijer_diff, QuadratureSpec};

/// Number of series terms beyond the constant one used by default (`k = 0, 1`).
pub const DEFAULT_SERIES_ORDER: u32 = 1;

/// How the per-endpoint BLER is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quadrature,
    Series { k_max: u32 },
    Asymptotic,
    MonteCarlo(McSettings),
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::Series { .. } => "series",
            Method::Asymptotic => "asymptotic",
            Method::MonteCarlo(_) => "monte_carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlerReport {
    pub psi_a: f64,
    pub psi_b: f64,
    /// `psi_a + psi_b`; may exceed 1.
    pub sum_bler: f64,
    pub method: Method,
    /// Combined standard error, Monte Carlo only.
    pub std_error: Option<f64>,
    /// Set when a component had to be clamped into `[0, 1]`.
    pub clamped: bool,
}

/// A per-endpoint BLER together with whether it was clamped into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiValue {
    pub value: f64,
    pub clamped: bool,
}

impl PsiValue {
    fn clamp(raw: f64) -> Self {
        let value = raw.clamp(0.0, 1.0);
        PsiValue {
            value,
            clamped: value != raw,
        }
    }
}

fn psi_quadrature_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 0.0,
        rel_tol: 1e-11,
        max_subdivisions: 2000,
    }
}

fn check_scheme(params: &SchemeParams, packet: &PacketConfig) -> Result<()> {
    packet.validate()?;
    if params.scheme != packet.scheme {
        return Err(Error::InvalidArgument(format!(
            "parameters are for {} but the packet uses {}",
            params.scheme, packet.scheme
        )));
    }
    Ok(())
}

fn knees(packet: &PacketConfig) -> Result<LinearQApprox> {
    linear_q_params(packet.rate(), packet.slot_len())
}

/// `ϑ √m_τ ∫_ζ^ξ F(x) dx` with `F` the approximate SNR CDF.
pub fn psi_quadrature(params: &SchemeParams, packet: &PacketConfig) -> Result<f64> {
    check_scheme(params, packet)?;
    let q = knees(packet)?;
    psi_quadrature_for(params, &q)
}

/// [`psi_quadrature`] for explicitly supplied knees.
pub fn psi_quadrature_for(params: &SchemeParams, q: &LinearQApprox) -> Result<f64> {
    let area = integrate(|x| snr_cdf_approx(params, x), q.zeta, q.xi, &psi_quadrature_spec())?;
    Ok((q.slope() * area).clamp(0.0, 1.0))
}

/// Truncated series in incomplete Bessel moments, terms `k = 0..=k_max`:
///
/// `Ψ ≈ 1 − (ϑ√m_τ c / 2√(ab)) Σ_k (−λ)^k/k! [Φ_k(ab ξ²/c²) − Φ_k(ab ζ²/c²)]`,
/// `λ = (a+b)/(2√(ab))`.
pub fn psi_series(params: &SchemeParams, packet: &PacketConfig, k_max: u32) -> Result<PsiValue> {
    check_scheme(params, packet)?;
    let q = knees(packet)?;
    psi_series_for(params, &q, k_max)
}

/// [`psi_series`] for explicitly supplied knees.
pub fn psi_series_for(params: &SchemeParams, q: &LinearQApprox, k_max: u32) -> Result<PsiValue> {
    let SchemeParams { a, b, c, .. } = *params;
    let root_ab = (a * b).sqrt();
    let lambda = (a + b) / (2.0 * root_ab);
    let prefactor = q.slope() * c / (2.0 * root_ab);
    let arg = |x: f64| a * b * x * x / (c * c);
    let (x_hi, x_lo) = (arg(q.xi), arg(q.zeta));

    let mut coeff = 1.0;
    let mut sum = 0.0;
    for k in 0..=k_max {
        if k > 0 {
            coeff *= -lambda / k as f64;
        }
        let term = coeff * phi_meijer_diff(x_hi, x_lo, k)?;
        if !term.is_finite() {
            return Err(Error::SeriesTerm { k: k as usize });
        }
        sum += term;
    }
    let raw = 1.0 - prefactor * sum;
    if !raw.is_finite() {
        return Err(Error::SeriesTerm { k: k_max as usize });
    }
    Ok(PsiValue::clamp(raw))
}

/// The relay split the three-slot schedule is evaluated at (optimal), or
/// `None` for the two-slot schedule.
pub fn default_split(snr: &AvgLinkSnr, scheme: Scheme) -> Option<PowerSplit> {
    match scheme {
        Scheme::TwoSlot => None,
        Scheme::ThreeSlot => Some(optimal_power_split(snr)),
    }
}

/// Sum of both endpoints' BLER under `method`.
pub fn sum_bler(
    snr: &AvgLinkSnr,
    packet: &PacketConfig,
    split: Option<PowerSplit>,
    method: Method,
) -> Result<BlerReport> {
    if let Method::MonteCarlo(settings) = method {
        return mc::estimate_sum_bler(snr, packet, split, &settings);
    }
    let mut psi = [PsiValue {
        value: 0.0,
        clamped: false,
    }; 2];
    for (slot, endpoint) in Endpoint::BOTH.into_iter().enumerate() {
        let params = scheme_params(snr, packet.scheme, endpoint, split)?;
        psi[slot] = match method {
            Method::Quadrature => PsiValue {
                value: psi_quadrature(&params, packet)?,
                clamped: false,
            },
            Method::Series { k_max } => psi_series(&params, packet, k_max)?,
            Method::Asymptotic => {
                let growth = rate_growth(packet.scheme, packet.sigma as f64, packet.m as f64);
                PsiValue::clamp(params.outage_slope() * growth)
            }
            Method::MonteCarlo(_) => unreachable!(),
        };
    }
    Ok(BlerReport {
        psi_a: psi[0].value,
        psi_b: psi[1].value,
        sum_bler: psi[0].value + psi[1].value,
        method,
        std_error: None,
        clamped: psi[0].clamped || psi[1].clamped,
    })
}

/// `2^{τσ/m} − 1`.
fn rate_growth(scheme: Scheme, sigma: f64, m: f64) -> f64 {
    (scheme.slots() as f64 * sigma / m * LN_2).exp_m1()
}

/// High-SNR constant `A = (a_A + b_A)/c_A + (a_B + b_B)/c_B`.
pub fn asymptotic_constant(snr: &AvgLinkSnr, scheme: Scheme, split: Option<PowerSplit>) -> Result<f64> {
    let mut total = 0.0;
    for endpoint in Endpoint::BOTH {
        total += scheme_params(snr, scheme, endpoint, split)?.outage_slope();
    }
    Ok(total)
}

/// High-SNR sum-BLER `A (2^{τσ/m} − 1)` for real `sigma ≥ 0` and `m > 0`.
/// Not clamped: it is a slope approximation and exceeds 2 at low SNR.
pub fn asymptotic_sum_bler(
    snr: &AvgLinkSnr,
    scheme: Scheme,
    split: Option<PowerSplit>,
    sigma: f64,
    m: f64,
) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::InvalidArgument(format!("blocklength must be positive, got {m}")));
    }
    Ok(asymptotic_constant(snr, scheme, split)? * rate_growth(scheme, sigma, m))
}

/// Relay split minimising the three-slot high-SNR sum-BLER:
/// `α² ∝ √(γ̄_AR²/γ̄_RA + γ̄_AR)`, `β² ∝ √(γ̄_BR²/γ̄_RB + γ̄_BR)`.
pub fn optimal_power_split(snr: &AvgLinkSnr) -> PowerSplit {
    let weight_a = (snr.g_ar * snr.g_ar / snr.g_ra + snr.g_ar).sqrt();
    let weight_b = (snr.g_br * snr.g_br / snr.g_rb + snr.g_br).sqrt();
    let alpha_sq = weight_a / (weight_a + weight_b);
    PowerSplit {
        alpha_sq,
        beta_sq: 1.0 - alpha_sq,
    }
}

/// High-SNR sum throughput `σ (2 − ε^∞(σ))`, floored at zero.
pub fn sum_throughput(
    snr: &AvgLinkSnr,
    scheme: Scheme,
    split: Option<PowerSplit>,
    sigma: f64,
    m: f64,
) -> Result<f64> {
    let eps = asymptotic_sum_bler(snr, scheme, split, sigma, m)?;
    Ok((sigma * (2.0 - eps)).max(0.0))
}

/// Payload maximising [`sum_throughput`]:
/// `σ* = m/(τ ln 2) · (W0(2e/A + e) − 1)`.
pub fn optimal_info_bits(snr: &AvgLinkSnr, scheme: Scheme, split: Option<PowerSplit>, m: f64) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::InvalidArgument(format!("blocklength must be positive, got {m}")));
    }
    let a_const = asymptotic_constant(snr, scheme, split)?;
    let w = lambert_w0(2.0 * E / a_const + E)?;
    Ok(m / (scheme.slots() as f64 * LN_2) * (w - 1.0))
}

/// Smallest blocklength meeting high-SNR sum-BLER `eps_target`:
/// `m̂ = στ / log2(1 + ε/A)`.
pub fn min_blocklength(
    snr: &AvgLinkSnr,
    scheme: Scheme,
    split: Option<PowerSplit>,
    sigma: f64,
    eps_target: f64,
) -> Result<f64> {
    if !(eps_target > 0.0 && eps_target.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "target sum-BLER must be positive, got {eps_target}"
        )));
    }
    let a_const = asymptotic_constant(snr, scheme, split)?;
    Ok(sigma * scheme.slots() as f64 * LN_2 / (eps_target / a_const).ln_1p())
}

/// High-SNR comparison of the two schedules, three-slot at its optimal split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSummary {
    pub a_const_2ts: f64,
    pub a_const_3ts: f64,
    /// `√(γ̄_AR γ̄_RB (γ̄_AR + γ̄_RA)) − √(γ̄_BR γ̄_RA (γ̄_BR + γ̄_RB))`
    pub delta: f64,
    /// `A_2TS / A_3TS − 1`
    pub eta: f64,
    /// Critical blocklength; `None` when `eta ≤ 1/2`.
    pub m_star: Option<f64>,
    pub split: PowerSplit,
}

/// Asymmetry statistics and critical blocklength for payload `sigma`.
pub fn asymptotic_summary(snr: &AvgLinkSnr, sigma: f64) -> Result<AsymptoticSummary> {
    snr.validate()?;
    let AvgLinkSnr {
        g_ar,
        g_br,
        g_ra,
        g_rb,
    } = *snr;
    let split = optimal_power_split(snr);
    let delta = (g_ar * g_rb * (g_ar + g_ra)).sqrt() - (g_br * g_ra * (g_br + g_rb)).sqrt();
    let cross = (g_ar * g_ra * (g_br + g_rb)).sqrt() + (g_br * g_rb * (g_ar + g_ra)).sqrt();
    let eta = (delta * delta - g_ra * g_rb * (g_ar + g_br)) / (cross * cross);
    let m_star = critical_blocklength(eta, sigma);
    Ok(AsymptoticSummary {
        a_const_2ts: asymptotic_constant(snr, Scheme::TwoSlot, None)?,
        a_const_3ts: asymptotic_constant(snr, Scheme::ThreeSlot, Some(split))?,
        delta,
        eta,
        m_star,
        split,
    })
}

/// `σ / log2((η + √(η² + 4η))/2)` for `η > 1/2`.
fn critical_blocklength(eta: f64, sigma: f64) -> Option<f64> {
    if !(eta > 0.5) {
        return None;
    }
    let root = 0.5 * (eta + (eta * eta + 4.0 * eta).sqrt());
    let m = sigma / root.log2();
    (m.is_finite() && m > 0.0).then_some(m)
}

/// `ε_2^∞ / ε_3^∞ = (1 + η) / (1 + t²/(t + 1))`, `t = 2^{σ/m}`.
pub fn bler_ratio_asymptotic(snr: &AvgLinkSnr, sigma: f64, m: f64) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::InvalidArgument(format!("blocklength must be positive, got {m}")));
    }
    let eta = asymptotic_summary(snr, sigma)?.eta;
    let t = (sigma / m).exp2();
    Ok((1.0 + eta) / (1.0 + t * t / (t + 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub scheme: Scheme,
    pub summary: AsymptoticSummary,
}

/// Schedule with the lower high-SNR sum-BLER under delay budget `m_d`:
/// three-slot only when the critical blocklength exists and `m_d` exceeds it.
pub fn recommend_scheme(snr: &AvgLinkSnr, sigma: f64, m_d: f64) -> Result<Recommendation> {
    if !(m_d > 0.0) {
        return Err(Error::InvalidArgument(format!("delay budget must be positive, got {m_d}")));
    }
    let summary = asymptotic_summary(snr, sigma)?;
    let scheme = match summary.m_star {
        Some(m_star) if m_d > m_star => Scheme::ThreeSlot,
        _ => Scheme::TwoSlot,
    };
    Ok(Recommendation { scheme, summary })
}
