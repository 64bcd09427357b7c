//! Exact 1-D Riemann solver for the gamma-law gas.
//!
//! The star pressure solves the classical two-wave function
//! `f_L(p) + f_R(p) + (uR - uL) = 0` by bracketed bisection. Shock branches
//! are evaluated through [`crate::shock`]'s Hugoniot solver, so every shock
//! this module produces satisfies the jump conditions by construction;
//! rarefaction branches use the isentropic closed forms.

use serde::Serialize;
use thiserror::Error;

use crate::eos::{Eos, EosError};
use crate::kinematics::SurfaceFrame;
use crate::linalg::Vec3;
use crate::roots::{solve_bracketed, BracketConfig};
use crate::shock::{solve_downstream, ShockError, ShockPair, Strength};
use crate::tensors::FluidState;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RiemannError {
    #[error("VacuumFormation: velocity divergence {du} exceeds critical {du_crit}")]
    VacuumFormation { du: f64, du_crit: f64 },
    #[error("NoBracket: {0}")]
    NoBracket(String),
    #[error("UnsolvedInput: {0}")]
    UnsolvedInput(&'static str),
    #[error("NotOneDimensional: transverse velocity {0:?}")]
    NotOneDimensional([f64; 2]),
    #[error("UnsupportedEos: gamma-law only")]
    UnsupportedEos,
    #[error(transparent)]
    Eos(#[from] EosError),
    #[error(transparent)]
    Shock(#[from] ShockError),
}

impl From<crate::roots::RootError> for RiemannError {
    fn from(e: crate::roots::RootError) -> Self {
        RiemannError::NoBracket(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WaveKind {
    Shock,
    Rarefaction,
}

/// Solved star region plus the wave fan geometry.
#[derive(Debug, Clone, Serialize)]
pub struct RiemannSolution {
    pub p_star: f64,
    pub u_star: f64,
    pub wave_left: WaveKind,
    pub wave_right: WaveKind,
    /// Star densities adjacent to the left and right waves.
    pub densities: (f64, f64),
    /// Star entropies adjacent to the left and right waves.
    pub entropies: (f64, f64),
    /// (head, tail) speeds of the left wave; equal for a shock.
    pub left_speeds: (f64, f64),
    /// (head, tail) speeds of the right wave; equal for a shock.
    pub right_speeds: (f64, f64),
    /// Jump data of shock waves, when present.
    pub left_shock: Option<ShockPair>,
    pub right_shock: Option<ShockPair>,
}

struct Side {
    rho: f64,
    u: f64,
    p: f64,
    s: f64,
    c: f64,
}

fn side_of(state: &FluidState, eos: &Eos) -> Result<Side, RiemannError> {
    if state.v[1].abs() > 0.0 || state.v[2].abs() > 0.0 {
        return Err(RiemannError::NotOneDimensional([state.v[1], state.v[2]]));
    }
    let t = eos.evaluate(state.rho, state.s)?;
    Ok(Side {
        rho: state.rho,
        u: state.v[0],
        p: t.p,
        s: state.s,
        c: t.sound_speed(),
    })
}

/// Velocity change across the wave on one side for trial pressure `p`:
/// the Hugoniot branch for compression, the isentrope for expansion.
fn wave_function(
    side: &Side,
    eos: &Eos,
    gamma: f64,
    p: f64,
    sign: f64,
) -> Result<f64, RiemannError> {
    if p > side.p {
        let up = FluidState::new(side.rho, Vec3::new(side.u, 0.0, 0.0), side.s);
        let frame = SurfaceFrame::new(Vec3::new(sign, 0.0, 0.0), 0.0).unwrap();
        let pair = solve_downstream(&up, eos, &frame, Strength::DownPressure(p))?;
        Ok(pair.u1() - pair.u2())
    } else {
        let exp = (gamma - 1.0) / (2.0 * gamma);
        Ok(2.0 * side.c / (gamma - 1.0) * ((p / side.p).powf(exp) - 1.0))
    }
}

/// Shock jump data for the wave on one side at star pressure `p_star`.
///
/// `sign = +1` selects the left wave (gas crosses in `+x`), `sign = -1` the
/// right wave.
fn shock_pair(side: &Side, eos: &Eos, p_star: f64, sign: f64) -> Result<ShockPair, RiemannError> {
    let up = FluidState::new(side.rho, Vec3::new(side.u, 0.0, 0.0), side.s);
    let frame = SurfaceFrame::new(Vec3::new(sign, 0.0, 0.0), 0.0).unwrap();
    Ok(solve_downstream(
        &up,
        eos,
        &frame,
        Strength::DownPressure(p_star),
    )?)
}

/// Solves the star region between two 1-D states.
pub fn solve_star(
    left: &FluidState,
    right: &FluidState,
    eos: &Eos,
) -> Result<RiemannSolution, RiemannError> {
    let gamma = match eos {
        Eos::IdealGas { gamma, .. } => *gamma,
        Eos::StiffenedGas { .. } => return Err(RiemannError::UnsupportedEos),
    };
    let l = side_of(left, eos)?;
    let r = side_of(right, eos)?;

    let du = r.u - l.u;
    let du_crit = 2.0 * l.c / (gamma - 1.0) + 2.0 * r.c / (gamma - 1.0);
    if du >= du_crit {
        return Err(RiemannError::VacuumFormation { du, du_crit });
    }

    let f = |p: f64| -> f64 {
        let fl = wave_function(&l, eos, gamma, p, 1.0).unwrap_or(f64::NAN);
        let fr = wave_function(&r, eos, gamma, p, -1.0).unwrap_or(f64::NAN);
        fl + fr + du
    };

    // f is monotone increasing in p; bracket between a near-vacuum pressure
    // and an expanding upper bound.
    let p_floor = 1e-14 * l.p.min(r.p);
    let mut p_hi = 2.0 * l.p.max(r.p);
    let cap = 1e10 * l.p.max(r.p);
    while f(p_hi) < 0.0 {
        p_hi *= 4.0;
        if p_hi > cap {
            return Err(RiemannError::NoBracket(format!(
                "star-pressure function has no sign change up to {cap:e}"
            )));
        }
    }
    let cfg = BracketConfig {
        f_tol: 1e-12,
        x_tol: 1e-16,
        max_iter: 200,
    };
    let p_star = solve_bracketed(f, p_floor, p_hi, &cfg)?;
    let fl = wave_function(&l, eos, gamma, p_star, 1.0)?;
    let fr = wave_function(&r, eos, gamma, p_star, -1.0)?;
    let u_star = 0.5 * (l.u + r.u) + 0.5 * (fr - fl);

    let mut sol = RiemannSolution {
        p_star,
        u_star,
        wave_left: if p_star > l.p {
            WaveKind::Shock
        } else {
            WaveKind::Rarefaction
        },
        wave_right: if p_star > r.p {
            WaveKind::Shock
        } else {
            WaveKind::Rarefaction
        },
        densities: (0.0, 0.0),
        entropies: (l.s, r.s),
        left_speeds: (0.0, 0.0),
        right_speeds: (0.0, 0.0),
        left_shock: None,
        right_shock: None,
    };

    match sol.wave_left {
        WaveKind::Shock => {
            let pair = shock_pair(&l, eos, p_star, 1.0)?;
            let speed = pair.frame.d_n;
            sol.densities.0 = pair.down.rho;
            sol.entropies.0 = pair.down.s;
            sol.left_speeds = (speed, speed);
            sol.left_shock = Some(pair);
        }
        WaveKind::Rarefaction => {
            let rho_star = l.rho * (p_star / l.p).powf(1.0 / gamma);
            let c_star = l.c * (p_star / l.p).powf((gamma - 1.0) / (2.0 * gamma));
            sol.densities.0 = rho_star;
            sol.left_speeds = (l.u - l.c, u_star - c_star);
        }
    }
    match sol.wave_right {
        WaveKind::Shock => {
            let pair = shock_pair(&r, eos, p_star, -1.0)?;
            // the frame normal points in -x; its speed along +x is -d_n
            let speed = -pair.frame.d_n;
            sol.densities.1 = pair.down.rho;
            sol.entropies.1 = pair.down.s;
            sol.right_speeds = (speed, speed);
            sol.right_shock = Some(pair);
        }
        WaveKind::Rarefaction => {
            let rho_star = r.rho * (p_star / r.p).powf(1.0 / gamma);
            let c_star = r.c * (p_star / r.p).powf((gamma - 1.0) / (2.0 * gamma));
            sol.densities.1 = rho_star;
            sol.right_speeds = (r.u + r.c, u_star + c_star);
        }
    }
    Ok(sol)
}

/// Samples the self-similar solution at `xi = x/t`.
pub fn sample(
    sol: &RiemannSolution,
    left: &FluidState,
    right: &FluidState,
    eos: &Eos,
    xi: f64,
) -> Result<FluidState, RiemannError> {
    if !(sol.p_star > 0.0) || !sol.p_star.is_finite() || !sol.u_star.is_finite() {
        return Err(RiemannError::UnsolvedInput("star state is not solved"));
    }
    let gamma = match eos {
        Eos::IdealGas { gamma, .. } => *gamma,
        Eos::StiffenedGas { .. } => return Err(RiemannError::UnsupportedEos),
    };
    let l = side_of(left, eos)?;
    let r = side_of(right, eos)?;

    let state = |rho: f64, u: f64, s: f64| FluidState::new(rho, Vec3::new(u, 0.0, 0.0), s);

    if xi <= sol.left_speeds.0 {
        return Ok(*left);
    }
    if xi < sol.left_speeds.1 {
        // inside the left fan
        let u = 2.0 / (gamma + 1.0) * (l.c + 0.5 * (gamma - 1.0) * l.u + xi);
        let c = 2.0 / (gamma + 1.0) * (l.c + 0.5 * (gamma - 1.0) * (l.u - xi));
        let rho = l.rho * (c / l.c).powf(2.0 / (gamma - 1.0));
        return Ok(state(rho, u, l.s));
    }
    if xi <= sol.u_star {
        return Ok(state(sol.densities.0, sol.u_star, sol.entropies.0));
    }
    if xi <= sol.right_speeds.1 {
        return Ok(state(sol.densities.1, sol.u_star, sol.entropies.1));
    }
    if xi < sol.right_speeds.0 {
        // inside the right fan
        let u = 2.0 / (gamma + 1.0) * (-r.c + 0.5 * (gamma - 1.0) * r.u + xi);
        let c = 2.0 / (gamma + 1.0) * (r.c - 0.5 * (gamma - 1.0) * (r.u - xi));
        let rho = r.rho * (c / r.c).powf(2.0 / (gamma - 1.0));
        return Ok(state(rho, u, r.s));
    }
    Ok(*right)
}
