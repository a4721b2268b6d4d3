//! Parameter sweeps emitting sum-BLER of both schedules as CSV.
//!
//! Columns, in order: `sweep_value`, then for `2TS` and `3TS` and each
//! requested method in the order quadrature, series, asymptotic,
//! monte_carlo: `sum_bler_<scheme>_<method>`; every Monte Carlo column is
//! followed by `sum_bler_<scheme>_monte_carlo_stderr`. The three-slot schedule
//! is always evaluated at its optimal relay split. The asymptotic column is
//! the unclamped high-SNR expression.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use twrn_core::analytic::{asymptotic_sum_bler, default_split, sum_bler};
use twrn_core::exec::{map_indexed, Execution};
use twrn_core::{McSettings, Method, PacketConfig, ScenarioConfig, Scheme};

use crate::error::{CliError, Result};

/// Both schedules need whole slots at the same `m`.
pub const M_GRANULARITY: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    PADbm,
    PBDbm,
    PRDbm,
    M,
    Sigma,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::PADbm => "p_a_dbm",
            SweepVariable::PBDbm => "p_b_dbm",
            SweepVariable::PRDbm => "p_r_dbm",
            SweepVariable::M => "m",
            SweepVariable::Sigma => "sigma",
        }
    }

    fn is_power(self) -> bool {
        matches!(self, SweepVariable::PADbm | SweepVariable::PBDbm | SweepVariable::PRDbm)
    }
}

impl FromStr for SweepVariable {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "p_a_dbm" => SweepVariable::PADbm,
            "p_b_dbm" => SweepVariable::PBDbm,
            "p_r_dbm" => SweepVariable::PRDbm,
            "m" => SweepVariable::M,
            "sigma" => SweepVariable::Sigma,
            _ => {
                return Err(CliError::Usage(format!(
                    "unknown sweep variable {s:?} (expected p_a_dbm, p_b_dbm, p_r_dbm, m or sigma)"
                )))
            }
        })
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

impl FromStr for Scale {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" | "lin" => Ok(Scale::Linear),
            "log" => Ok(Scale::Log),
            _ => Err(CliError::Usage(format!("unknown scale {s:?} (expected linear or log)"))),
        }
    }
}

/// A transmit power that follows the swept power at a fixed dB offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTie {
    pub target: SweepVariable,
    pub offset_db: f64,
}

impl FromStr for PowerTie {
    type Err = CliError;

    /// `p_b_dbm=10` ties `p_b_dbm` to the swept value plus 10 dB.
    fn from_str(s: &str) -> Result<Self> {
        let (field, offset) = s
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("tie {s:?} must look like p_b_dbm=10")))?;
        let target: SweepVariable = field.trim().parse()?;
        let offset_db: f64 = offset
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("tie offset {offset:?} is not a number")))?;
        Ok(PowerTie { target, offset_db })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: Scale,
    pub ties: Vec<PowerTie>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(CliError::Usage(format!(
                "sweep needs finite start < stop, got {} .. {}",
                self.start, self.stop
            )));
        }
        if self.points < 2 {
            return Err(CliError::Usage("sweep needs at least 2 points".into()));
        }
        if self.scale == Scale::Log && self.start <= 0.0 {
            return Err(CliError::Usage("log sweep needs start > 0".into()));
        }
        if matches!(self.variable, SweepVariable::M | SweepVariable::Sigma) && self.start < 1.0 {
            return Err(CliError::Usage(format!("{} sweep must start at >= 1", self.variable)));
        }
        for tie in &self.ties {
            if !self.variable.is_power() || !tie.target.is_power() || tie.target == self.variable {
                return Err(CliError::Usage(format!(
                    "cannot tie {} to a {} sweep",
                    tie.target, self.variable
                )));
            }
        }
        Ok(())
    }

    /// Grid values; `m` is snapped to the nearest positive multiple of 6 and
    /// `sigma` to the nearest positive integer.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                let raw = match self.scale {
                    Scale::Linear => self.start + (self.stop - self.start) * t,
                    Scale::Log => self.start * (self.stop / self.start).powf(t),
                };
                match self.variable {
                    SweepVariable::M => {
                        let g = M_GRANULARITY as f64;
                        ((raw / g).round() * g).max(g)
                    }
                    SweepVariable::Sigma => raw.round().max(1.0),
                    _ => raw,
                }
            })
            .collect()
    }
}

/// Evaluation methods a sweep can emit, in canonical column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MethodKind {
    Quadrature,
    Series,
    Asymptotic,
    MonteCarlo,
}

impl MethodKind {
    pub fn name(self) -> &'static str {
        match self {
            MethodKind::Quadrature => "quadrature",
            MethodKind::Series => "series",
            MethodKind::Asymptotic => "asymptotic",
            MethodKind::MonteCarlo => "monte_carlo",
        }
    }

    /// Parses a comma-separated list, returning it deduplicated in canonical order.
    pub fn parse_list(s: &str) -> Result<Vec<MethodKind>> {
        let mut out = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<MethodKind>>>()?;
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(CliError::Usage("no methods requested".into()));
        }
        Ok(out)
    }
}

impl FromStr for MethodKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "quadrature" => MethodKind::Quadrature,
            "series" => MethodKind::Series,
            "asymptotic" => MethodKind::Asymptotic,
            "monte_carlo" | "mc" => MethodKind::MonteCarlo,
            _ => {
                return Err(CliError::Usage(format!(
                    "unknown method {s:?} (expected quadrature, series, asymptotic or monte_carlo)"
                )))
            }
        })
    }
}

/// Everything a sweep needs besides the output sink.
#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub scenario: ScenarioConfig,
    pub sigma: u32,
    pub m: u32,
    pub sweep: SweepSpec,
    pub methods: Vec<MethodKind>,
    pub mc: McSettings,
    pub series_k_max: u32,
    pub execution: Execution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOutcome {
    pub rows: usize,
    pub nan_cells: usize,
}

pub fn header(methods: &[MethodKind]) -> Vec<String> {
    let mut cols = vec!["sweep_value".to_string()];
    for scheme in Scheme::ALL {
        for method in methods {
            cols.push(format!("sum_bler_{}_{}", scheme.label(), method.name()));
            if *method == MethodKind::MonteCarlo {
                cols.push(format!("sum_bler_{}_monte_carlo_stderr", scheme.label()));
            }
        }
    }
    cols
}

/// Shortest round-trip decimal; non-finite values as `nan`, `inf`, `-inf`.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

fn point_inputs(req: &SweepRequest, value: f64) -> (ScenarioConfig, u32, u32) {
    let mut cfg = req.scenario;
    let (mut sigma, mut m) = (req.sigma, req.m);
    match req.sweep.variable {
        SweepVariable::PADbm => cfg.p_a_dbm = value,
        SweepVariable::PBDbm => cfg.p_b_dbm = value,
        SweepVariable::PRDbm => cfg.p_r_dbm = value,
        SweepVariable::M => m = value as u32,
        SweepVariable::Sigma => sigma = value as u32,
    }
    for tie in &req.sweep.ties {
        let v = value + tie.offset_db;
        match tie.target {
            SweepVariable::PADbm => cfg.p_a_dbm = v,
            SweepVariable::PBDbm => cfg.p_b_dbm = v,
            SweepVariable::PRDbm => cfg.p_r_dbm = v,
            _ => {}
        }
    }
    (cfg, sigma, m)
}

fn evaluate_cell(
    cfg: &ScenarioConfig,
    sigma: u32,
    m: u32,
    scheme: Scheme,
    method: MethodKind,
    req: &SweepRequest,
) -> twrn_core::Result<(f64, Option<f64>)> {
    let snr = cfg.average_snrs()?;
    let split = default_split(&snr, scheme);
    if method == MethodKind::Asymptotic {
        return Ok((asymptotic_sum_bler(&snr, scheme, split, sigma as f64, m as f64)?, None));
    }
    let packet = PacketConfig::new(sigma, m, scheme)?;
    let method = match method {
        MethodKind::Quadrature => Method::Quadrature,
        MethodKind::Series => Method::Series {
            k_max: req.series_k_max,
        },
        MethodKind::MonteCarlo => Method::MonteCarlo(req.mc),
        MethodKind::Asymptotic => unreachable!(),
    };
    let report = sum_bler(&snr, &packet, split, method)?;
    Ok((report.sum_bler, report.std_error))
}

/// Evaluates every sweep point and writes header plus one row per point.
/// Methods are emitted in canonical order whatever order they are given in.
///
/// Points are evaluated concurrently and written in sweep order. A failing
/// cell becomes `nan` with a warning on standard error.
pub fn run_bler_sweep<W: Write>(req: &SweepRequest, out: &mut W) -> Result<SweepOutcome> {
    req.sweep.validate()?;
    req.scenario.validate().map_err(|e| CliError::Config(e.to_string()))?;
    req.mc.validate()?;
    if req.methods.is_empty() {
        return Err(CliError::Usage("no methods requested".into()));
    }
    if req.sigma == 0 {
        return Err(CliError::Usage("sigma must be at least 1".into()));
    }
    if req.sweep.variable != SweepVariable::M && (req.m == 0 || !req.m.is_multiple_of(M_GRANULARITY)) {
        return Err(CliError::Usage(format!(
            "m = {} must be a positive multiple of {M_GRANULARITY} so both schemes use whole slots",
            req.m
        )));
    }

    let mut methods = req.methods.clone();
    methods.sort();
    methods.dedup();
    let values = req.sweep.values();
    let rows: Vec<(Vec<f64>, usize)> = map_indexed(values.len(), req.execution, |i| {
        let value = values[i];
        let (cfg, sigma, m) = point_inputs(req, value);
        let mut row = vec![value];
        let mut nans = 0;
        for scheme in Scheme::ALL {
            for &method in &methods {
                let cell = evaluate_cell(&cfg, sigma, m, scheme, method, req);
                let (v, se) = match cell {
                    Ok(v) => v,
                    Err(e) => {
                        log::warn!(
                            "{}={} {} {}: {e}; writing nan",
                            req.sweep.variable,
                            format_value(value),
                            scheme,
                            method.name()
                        );
                        nans += 1;
                        (f64::NAN, Some(f64::NAN))
                    }
                };
                row.push(v);
                if method == MethodKind::MonteCarlo {
                    row.push(se.unwrap_or(f64::NAN));
                }
            }
        }
        (row, nans)
    });

    writeln!(out, "{}", header(&methods).join(","))?;
    let mut nan_cells = 0;
    for (row, nans) in &rows {
        nan_cells += nans;
        let line: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(SweepOutcome {
        rows: rows.len(),
        nan_cells,
    })
}
