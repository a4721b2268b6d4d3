//! Scenario loading: a JSON file with the `ScenarioConfig` field names,
//! optionally overridden field by field.

use std::fs;
use std::path::Path;

use twrn_core::ScenarioConfig;

use crate::error::{CliError, Result};

/// Per-field overrides applied on top of a loaded scenario.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScenarioOverrides {
    pub p_a_dbm: Option<f64>,
    pub p_b_dbm: Option<f64>,
    pub p_r_dbm: Option<f64>,
    pub n_a_dbm: Option<f64>,
    pub n_b_dbm: Option<f64>,
    pub n_r_dbm: Option<f64>,
    pub d_ar: Option<f64>,
    pub d_br: Option<f64>,
    pub omega: Option<f64>,
}

impl ScenarioOverrides {
    pub fn apply(&self, cfg: &mut ScenarioConfig) {
        let fields = [
            (&mut cfg.p_a_dbm, self.p_a_dbm),
            (&mut cfg.p_b_dbm, self.p_b_dbm),
            (&mut cfg.p_r_dbm, self.p_r_dbm),
            (&mut cfg.n_a_dbm, self.n_a_dbm),
            (&mut cfg.n_b_dbm, self.n_b_dbm),
            (&mut cfg.n_r_dbm, self.n_r_dbm),
            (&mut cfg.d_ar, self.d_ar),
            (&mut cfg.d_br, self.d_br),
            (&mut cfg.omega, self.omega),
        ];
        for (slot, value) in fields {
            if let Some(v) = value {
                *slot = v;
            }
        }
    }
}

pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

/// Loads `path` (or the reference geometry at 40/55/45 dBm when absent),
/// applies overrides and validates the result.
pub fn load_scenario(path: Option<&Path>, overrides: &ScenarioOverrides) -> Result<ScenarioConfig> {
    let mut cfg = match path {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            parse_scenario(&text)?
        }
        None => ScenarioConfig::reference_geometry(40.0, 55.0, 45.0),
    };
    overrides.apply(&mut cfg);
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"{"p_a_dbm":40,"p_b_dbm":55,"p_r_dbm":45,"n_a_dbm":-80,
        "n_b_dbm":-80,"n_r_dbm":-80,"d_ar":50,"d_br":50,"omega":3}"#;

    #[test]
    fn overrides_win() {
        let mut cfg = parse_scenario(FULL).unwrap();
        ScenarioOverrides {
            p_r_dbm: Some(30.0),
            ..Default::default()
        }
        .apply(&mut cfg);
        assert_eq!(cfg.p_r_dbm, 30.0);
        assert_eq!(cfg.p_b_dbm, 55.0);
    }

    #[test]
    fn missing_and_unknown_fields_are_config_errors() {
        let missing = FULL.replace(r#""omega":3"#, r#""d_ab":100"#);
        assert!(matches!(parse_scenario(&missing), Err(CliError::Config(_))));
        let extra = FULL.replace(r#""omega":3"#, r#""omega":3,"d_ab":100"#);
        let err = parse_scenario(&extra).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
