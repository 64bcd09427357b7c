//! Configuration file, named tolerances, and the global tolerance scale.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::output::CliError;

pub const TOLERANCE_NAMES: &[(&str, f64)] = &[
    // scaled shock residual norm accepted by solve/check/riemann
    ("shock_residual", 1e-10),
    // scaled surface-term norms accepted by solve/check/gap-demo
    ("surface_term", 1e-10),
    // componentwise defect between F*-DivT and the bulk residuals
    ("table_equivalence", 1e-10),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    eos_path: Option<PathBuf>,
    tolerances: Option<BTreeMap<String, f64>>,
    output_format: Option<OutputFormat>,
    seed: Option<u64>,
}

pub struct Settings {
    pub eos_path: Option<PathBuf>,
    tolerances: BTreeMap<String, f64>,
    pub output_format: OutputFormat,
    pub seed: u64,
    pub tolerance_scale: f64,
}

impl Settings {
    pub fn load(config: Option<&Path>) -> Result<Self, CliError> {
        let file: ConfigFile = match config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::usage(format!("cannot read config {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text).map_err(|e| {
                    CliError::usage(format!("invalid config {}: {e}", path.display()))
                })?
            }
            None => ConfigFile::default(),
        };

        let mut tolerances: BTreeMap<String, f64> = TOLERANCE_NAMES
            .iter()
            .map(|&(k, v)| (k.to_string(), v))
            .collect();
        if let Some(overrides) = file.tolerances {
            for (name, value) in overrides {
                if !tolerances.contains_key(&name) {
                    return Err(CliError::usage(format!(
                        "unknown tolerance \"{name}\"; known: {}",
                        TOLERANCE_NAMES
                            .iter()
                            .map(|&(k, _)| k)
                            .collect::<Vec<_>>()
                            .join(", ")
                    )));
                }
                if !(value > 0.0) || !value.is_finite() {
                    return Err(CliError::usage(format!(
                        "tolerance \"{name}\" must be a positive number, got {value}"
                    )));
                }
                tolerances.insert(name, value);
            }
        }

        let tolerance_scale = match std::env::var("RHKIT_TOLERANCE_SCALE") {
            Ok(text) => text
                .parse::<f64>()
                .ok()
                .filter(|s| *s > 0.0)
                .ok_or_else(|| {
                    CliError::usage(format!(
                        "RHKIT_TOLERANCE_SCALE must be a positive number, got \"{text}\""
                    ))
                })?,
            Err(_) => 1.0,
        };

        Ok(Settings {
            eos_path: file.eos_path,
            tolerances,
            output_format: file.output_format.unwrap_or(OutputFormat::Csv),
            seed: file.seed.unwrap_or(0),
            tolerance_scale,
        })
    }

    /// Effective tolerance: named default or override, scaled globally.
    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances[name] * self.tolerance_scale
    }
}
