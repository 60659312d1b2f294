//! The experiment config document: a schema-versioned JSON file holding
//! one scenario, an optional sweep, and the output directory. A run is a
//! pure function of this document (plus the seed overrides), so configs
//! double as experiment records.

use std::path::Path;

use serde::{Deserialize, Serialize};
use wmobs_core::harness::{sweep_points, ScenarioConfig};

use crate::{CliError, Result};

pub const CLI_SCHEMA_VERSION: u32 = 1;

/// Sweeps rerun the scenario once per value along one named axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub scenario: ScenarioConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
}

fn default_out_dir() -> String {
    "out".into()
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            schema_version: CLI_SCHEMA_VERSION,
            scenario: ScenarioConfig::default(),
            sweep: None,
            out_dir: default_out_dir(),
        }
    }
}

impl CliConfig {
    /// Full semantic validation: scenario invariants plus, for sweeps, a
    /// dry expansion of every point so bad axis names or values surface
    /// before any work starts.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != CLI_SCHEMA_VERSION {
            return Err(CliError::Schema(format!(
                "schema_version: this tool reads version {CLI_SCHEMA_VERSION}, got {}",
                self.schema_version
            )));
        }
        self.scenario
            .validate()
            .map_err(|e| CliError::Schema(format!("scenario: {e}")))?;
        if let Some(s) = &self.sweep {
            sweep_points(&self.scenario, &s.axis, &s.values)
                .map_err(|e| CliError::Schema(format!("sweep: {e}")))?;
        }
        Ok(())
    }
}

/// Parses and validates a config document from text. Unknown keys are
/// rejected with the key named in the message.
pub fn parse_config_str(text: &str) -> Result<CliConfig> {
    let cfg: CliConfig =
        serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Parses and validates the config file at `path`.
pub fn parse_config(path: &Path) -> Result<CliConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::ReadIo {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_config_str(&text)
}

/// The default config as a pretty JSON document; `parse_config_str` on
/// this text returns exactly `CliConfig::default()`.
pub fn default_config_text() -> String {
    let mut text = serde_json::to_string_pretty(&CliConfig::default())
        .expect("default config serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_documented_defaults() {
        let cfg = parse_config_str("{\"schema_version\": 1}").unwrap();
        assert_eq!(cfg.scenario.target_fpr, 0.01);
        assert_eq!(cfg.scenario.test_samples_per_entity, 100);
        assert_eq!(cfg.out_dir, "out");
        assert!(cfg.sweep.is_none());
    }

    #[test]
    fn defaults_round_trip_identically() {
        let text = default_config_text();
        let cfg = parse_config_str(&text).unwrap();
        assert_eq!(cfg, CliConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let err = parse_config_str("{\"schema_version\": 1, \"gamma_typo\": 0.3}").unwrap_err();
        assert!(err.to_string().contains("gamma_typo"), "{err}");
        let err = parse_config_str(
            "{\"schema_version\": 1, \"scenario\": {\"gamma_typo\": 0.3}}",
        )
        .unwrap_err();
        assert!(err.to_string().contains("gamma_typo"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn schema_version_is_checked() {
        let err = parse_config_str("{\"schema_version\": 2}").unwrap_err();
        assert!(err.to_string().contains("schema_version"), "{err}");
    }

    #[test]
    fn sweeps_are_dry_checked() {
        let base = "{\"schema_version\": 1, \"sweep\": {\"axis\": \"entities\", \"values\": [2]}}";
        let err = parse_config_str(base).unwrap_err();
        assert!(err.to_string().contains("entities"), "{err}");
        let bad_value =
            "{\"schema_version\": 1, \"sweep\": {\"axis\": \"n_entities\", \"values\": [2.5]}}";
        assert!(parse_config_str(bad_value).is_err());
    }

    #[test]
    fn scenario_invariants_surface_as_config_errors() {
        let err = parse_config_str(
            "{\"schema_version\": 1, \"scenario\": {\"target_fpr\": 1.5}}",
        )
        .unwrap_err();
        assert!(matches!(err, CliError::Schema(_)));
        assert!(err.to_string().contains("target_fpr"), "{err}");
    }
}
