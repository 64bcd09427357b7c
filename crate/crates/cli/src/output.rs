//! Error mapping and deterministic output formatting.

use std::fmt;

use rhkit_core::eos::EosError;
use rhkit_core::kinematics::KinematicsError;
use rhkit_core::riemann::RiemannError;
use rhkit_core::shock::ShockError;
use rhkit_core::tensors::TensorsError;

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or unreadable input: exit 1.
    Usage(String),
    /// A domain error from the library: exit 2, JSON error object on stdout.
    Physics {
        module: &'static str,
        name: String,
        message: String,
    },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Physics {
                module,
                name,
                message,
            } => write!(f, "{module}: {name}: {message}"),
        }
    }
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn physics(module: &'static str, display: String) -> Self {
        // error variants render as "Name: detail"
        let name = display
            .split(':')
            .next()
            .unwrap_or("Unknown")
            .trim()
            .to_string();
        CliError::Physics {
            module,
            name,
            message: display,
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            CliError::Usage(msg) => serde_json::json!({"error": {"message": msg}}).to_string(),
            CliError::Physics {
                module,
                name,
                message,
            } => serde_json::json!({
                "error": {"module": module, "name": name, "message": message}
            })
            .to_string(),
        }
    }
}

impl From<EosError> for CliError {
    fn from(e: EosError) -> Self {
        CliError::physics("eos", e.to_string())
    }
}

impl From<KinematicsError> for CliError {
    fn from(e: KinematicsError) -> Self {
        CliError::physics("kinematics", e.to_string())
    }
}

impl From<TensorsError> for CliError {
    fn from(e: TensorsError) -> Self {
        CliError::physics("tensors", e.to_string())
    }
}

impl From<ShockError> for CliError {
    fn from(e: ShockError) -> Self {
        CliError::physics("shock", e.to_string())
    }
}

impl From<RiemannError> for CliError {
    fn from(e: RiemannError) -> Self {
        CliError::physics("riemann", e.to_string())
    }
}

/// Full double precision: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn print_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable report")
    );
}

/// One CSV row at full precision.
pub fn csv_row(values: &[f64]) -> String {
    values
        .iter()
        .map(|&x| fmt_f64(x))
        .collect::<Vec<_>>()
        .join(",")
}
