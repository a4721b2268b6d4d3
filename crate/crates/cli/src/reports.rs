//! JSON reports for the `recommend`, `design` and `simulate` subcommands.

use serde::Serialize;

use twrn_core::analytic::{
    asymptotic_sum_bler, default_split, min_blocklength, optimal_info_bits, recommend_scheme,
    sum_bler, asymptotic_constant,
};
use twrn_core::{McSettings, Method, PacketConfig, ScenarioConfig, Scheme};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize)]
pub struct RecommendReport {
    pub scheme: Scheme,
    pub m_star: Option<f64>,
    pub eta: f64,
    pub delta: f64,
    pub a_const_2ts: f64,
    pub a_const_3ts: f64,
    pub alpha_sq: f64,
    pub beta_sq: f64,
    pub sigma: f64,
    pub m_d: f64,
    pub scenario: ScenarioConfig,
}

/// Schedule choice for payload `sigma` under delay budget `m_d`.
pub fn run_recommend(scenario: &ScenarioConfig, sigma: f64, m_d: f64) -> Result<RecommendReport> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(CliError::Usage(format!("sigma must be non-negative, got {sigma}")));
    }
    let snr = scenario.average_snrs()?;
    let rec = recommend_scheme(&snr, sigma, m_d)?;
    let s = rec.summary;
    Ok(RecommendReport {
        scheme: rec.scheme,
        m_star: s.m_star,
        eta: s.eta,
        delta: s.delta,
        a_const_2ts: s.a_const_2ts,
        a_const_3ts: s.a_const_3ts,
        alpha_sq: s.split.alpha_sq,
        beta_sq: s.split.beta_sq,
        sigma,
        m_d,
        scenario: *scenario,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignReport {
    pub scheme: Scheme,
    pub sigma: f64,
    pub eps_target: f64,
    pub m: Option<f64>,
    pub a_const: f64,
    /// Relay split used for the three-slot schedule.
    pub alpha_sq: Option<f64>,
    pub m_hat: f64,
    /// High-SNR sum-BLER evaluated back at `m_hat`.
    pub eps_at_m_hat: f64,
    pub sigma_star: Option<f64>,
    pub scenario: ScenarioConfig,
}

/// Minimum blocklength for `eps_target`, and the throughput-optimal payload
/// at blocklength `m` when one is given.
pub fn run_design(
    scenario: &ScenarioConfig,
    sigma: f64,
    scheme: Scheme,
    eps_target: f64,
    m: Option<f64>,
) -> Result<DesignReport> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(CliError::Usage(format!("sigma must be positive, got {sigma}")));
    }
    let snr = scenario.average_snrs()?;
    let split = default_split(&snr, scheme);
    let m_hat = min_blocklength(&snr, scheme, split, sigma, eps_target)?;
    let eps_at_m_hat = asymptotic_sum_bler(&snr, scheme, split, sigma, m_hat)?;
    let sigma_star = m
        .map(|m| optimal_info_bits(&snr, scheme, split, m))
        .transpose()?;
    Ok(DesignReport {
        scheme,
        sigma,
        eps_target,
        m,
        a_const: asymptotic_constant(&snr, scheme, split)?,
        alpha_sq: split.map(|s| s.alpha_sq),
        m_hat,
        eps_at_m_hat,
        sigma_star,
        scenario: *scenario,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateReport {
    pub scheme: Scheme,
    pub sigma: u32,
    pub m: u32,
    pub trials: u64,
    pub seed: u64,
    pub exact_snr: bool,
    pub alpha_sq: Option<f64>,
    pub psi_a: f64,
    pub psi_b: f64,
    pub sum_bler: f64,
    pub std_error: f64,
    /// Quadrature prediction at the same point, for comparison.
    pub sum_bler_quadrature: f64,
    pub scenario: ScenarioConfig,
}

/// Direct Monte Carlo estimate of the sum-BLER at one operating point.
pub fn run_simulate(
    scenario: &ScenarioConfig,
    sigma: u32,
    m: u32,
    scheme: Scheme,
    mc: McSettings,
) -> Result<SimulateReport> {
    let packet = PacketConfig::new(sigma, m, scheme)?;
    let snr = scenario.average_snrs()?;
    let split = default_split(&snr, scheme);
    let report = sum_bler(&snr, &packet, split, Method::MonteCarlo(mc))?;
    let quadrature = sum_bler(&snr, &packet, split, Method::Quadrature)?;
    Ok(SimulateReport {
        scheme,
        sigma,
        m,
        trials: mc.trials,
        seed: mc.seed,
        exact_snr: mc.use_exact_snr,
        alpha_sq: split.map(|s| s.alpha_sq),
        psi_a: report.psi_a,
        psi_b: report.psi_b,
        sum_bler: report.sum_bler,
        std_error: report.std_error.unwrap_or(f64::NAN),
        sum_bler_quadrature: quadrature.sum_bler,
        scenario: *scenario,
    })
}
