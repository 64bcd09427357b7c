//! Equation-of-state layer.
//!
//! The specific internal energy `alpha(rho, s)` is the generating function:
//! every other thermodynamic quantity is one of its derivatives,
//!
//! ```text
//! p = rho^2 d(alpha)/d(rho),   h = alpha + p/rho,
//! theta = d(alpha)/d(s),       c^2 = d(p)/d(rho) at fixed s.
//! ```
//!
//! Two closed-form instances are provided. The polytropic (gamma-law) gas in
//! `(rho, s)` variables,
//!
//! ```text
//! alpha = K rho^(gamma-1) e^(s/c_v) / (gamma - 1),   p = K rho^gamma e^(s/c_v),
//! ```
//!
//! and a stiffened variant with `p = K rho^gamma e^(s/c_v) - gamma p_inf`.
//! Closed forms keep the Gibbs identity `dh = theta ds + dp/rho` exact to
//! rounding, which the jump-condition tests rely on. All quantities are
//! nondimensional.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EosError {
    #[error("NonPositiveDensity: rho = {0}")]
    NonPositiveDensity(f64),
    #[error("SoundSpeedUndefined: c^2 = {0}")]
    SoundSpeedUndefined(f64),
    #[error("InvalidParameter: {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("UnreachableState: no entropy gives {quantity} = {value} at rho = {rho}")]
    UnreachableState {
        quantity: &'static str,
        value: f64,
        rho: f64,
    },
}

/// Equation of state with closed-form `alpha(rho, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Eos {
    IdealGas {
        gamma: f64,
        c_v: f64,
        #[serde(rename = "K")]
        k: f64,
    },
    StiffenedGas {
        gamma: f64,
        c_v: f64,
        #[serde(rename = "K")]
        k: f64,
        p_inf: f64,
    },
}

/// All thermodynamic quantities at one `(rho, s)` point.
///
/// `h = alpha + p/rho` holds exactly by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoPoint {
    /// Specific internal energy.
    pub alpha: f64,
    /// Pressure.
    pub p: f64,
    /// Specific enthalpy.
    pub h: f64,
    /// Kelvin temperature.
    pub theta: f64,
    /// Squared sound speed.
    pub c2: f64,
}

impl ThermoPoint {
    pub fn sound_speed(&self) -> f64 {
        self.c2.sqrt()
    }
}

impl Eos {
    pub fn ideal_gas(gamma: f64, c_v: f64, k: f64) -> Result<Self, EosError> {
        let eos = Eos::IdealGas { gamma, c_v, k };
        eos.validate()?;
        Ok(eos)
    }

    pub fn stiffened_gas(gamma: f64, c_v: f64, k: f64, p_inf: f64) -> Result<Self, EosError> {
        let eos = Eos::StiffenedGas {
            gamma,
            c_v,
            k,
            p_inf,
        };
        eos.validate()?;
        Ok(eos)
    }

    /// Parameter checks: `gamma > 1`, `c_v > 0`, `K > 0`, `p_inf >= 0`.
    pub fn validate(&self) -> Result<(), EosError> {
        let (gamma, c_v, k, p_inf) = self.params();
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(EosError::InvalidParameter {
                name: "gamma",
                value: gamma,
            });
        }
        if !(c_v > 0.0) || !c_v.is_finite() {
            return Err(EosError::InvalidParameter {
                name: "c_v",
                value: c_v,
            });
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(EosError::InvalidParameter {
                name: "K",
                value: k,
            });
        }
        if !(p_inf >= 0.0) || !p_inf.is_finite() {
            return Err(EosError::InvalidParameter {
                name: "p_inf",
                value: p_inf,
            });
        }
        Ok(())
    }

    pub fn gamma(&self) -> f64 {
        self.params().0
    }

    fn params(&self) -> (f64, f64, f64, f64) {
        match *self {
            Eos::IdealGas { gamma, c_v, k } => (gamma, c_v, k, 0.0),
            Eos::StiffenedGas {
                gamma,
                c_v,
                k,
                p_inf,
            } => (gamma, c_v, k, p_inf),
        }
    }

    /// Evaluate all thermodynamic quantities at `(rho, s)`.
    pub fn evaluate(&self, rho: f64, s: f64) -> Result<ThermoPoint, EosError> {
        if !(rho > 0.0) {
            return Err(EosError::NonPositiveDensity(rho));
        }
        let (gamma, c_v, k, p_inf) = self.params();
        // Common core: K rho^(gamma-1) e^(s/c_v).
        let core = k * rho.powf(gamma - 1.0) * (s / c_v).exp();
        let (alpha, p) = match self {
            Eos::IdealGas { .. } => (core / (gamma - 1.0), core * rho),
            Eos::StiffenedGas { .. } => (
                core / (gamma - 1.0) + gamma * p_inf / rho,
                core * rho - gamma * p_inf,
            ),
        };
        let h = alpha + p / rho;
        let theta = core / (c_v * (gamma - 1.0));
        let c2 = gamma * core;
        if !(c2 > 0.0) {
            return Err(EosError::SoundSpeedUndefined(c2));
        }
        Ok(ThermoPoint {
            alpha,
            p,
            h,
            theta,
            c2,
        })
    }

    /// Entropy on the isochore `rho` at pressure `p`.
    pub fn entropy_from_pressure(&self, rho: f64, p: f64) -> Result<f64, EosError> {
        if !(rho > 0.0) {
            return Err(EosError::NonPositiveDensity(rho));
        }
        let (gamma, c_v, k, p_inf) = self.params();
        let shifted = p + gamma * p_inf;
        if !(shifted > 0.0) {
            return Err(EosError::UnreachableState {
                quantity: "pressure",
                value: p,
                rho,
            });
        }
        Ok(c_v * (shifted / (k * rho.powf(gamma))).ln())
    }

    /// Entropy on the isochore `rho` at specific enthalpy `h`.
    ///
    /// Both closed forms share `h = gamma/(gamma-1) K rho^(gamma-1) e^(s/c_v)`,
    /// so the inversion is exact; `h <= 0` is unreachable.
    pub fn entropy_from_enthalpy(&self, rho: f64, h: f64) -> Result<f64, EosError> {
        if !(rho > 0.0) {
            return Err(EosError::NonPositiveDensity(rho));
        }
        let (gamma, c_v, k, _) = self.params();
        if !(h > 0.0) {
            return Err(EosError::UnreachableState {
                quantity: "enthalpy",
                value: h,
                rho,
            });
        }
        Ok(c_v * (h * (gamma - 1.0) / (gamma * k * rho.powf(gamma - 1.0))).ln())
    }

    /// Strong-shock limit of the compression ratio, `(gamma+1)/(gamma-1)`.
    pub fn max_compression_ratio(&self) -> f64 {
        let gamma = self.gamma();
        (gamma + 1.0) / (gamma - 1.0)
    }

    /// Second-order residual of the Gibbs identity `dh = theta ds + dp/rho`
    /// over the finite increment `(drho, ds)`. The coefficients `theta` and
    /// `1/rho` are taken at the midpoint, so the residual is O(|increment|^3).
    pub fn gibbs_residual(&self, rho: f64, s: f64, drho: f64, ds: f64) -> Result<f64, EosError> {
        let a = self.evaluate(rho, s)?;
        let b = self.evaluate(rho + drho, s + ds)?;
        let mid = self.evaluate(rho + 0.5 * drho, s + 0.5 * ds)?;
        let dh = b.h - a.h;
        let dp = b.p - a.p;
        Ok((dh - mid.theta * ds - dp / (rho + 0.5 * drho)).abs())
    }
}
