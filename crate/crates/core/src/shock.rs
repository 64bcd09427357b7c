//! Rankine-Hugoniot residuals, both variational surface terms, downstream
//! solving, Hugoniot loci, admissibility, and the two-route counterexample.
//!
//! Orientation convention: the unit normal `n` points from upstream (side 1)
//! to downstream (side 2), and upstream means `u1 > 0`.
//!
//! For jump data with nonzero mass flux the full shock set is
//!
//! ```text
//! [rho u] = 0,  [p + rho u^2] = 0,  [v] = [u] n,  [u^2/2 + h] = 0,
//! ```
//!
//! equivalent to the vanishing of the space-time surface term `N* [T]` with
//! `N* = (-D_n, n*)`. The reference-space surface term `-f [v*F + m w*]`
//! vanishes under the smaller set that omits `[p + rho u^2] = 0`;
//! [`construct_crh2_pair`] builds jump data separating the two.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eos::{Eos, EosError};
use crate::kinematics::{w_from_deformation, KinematicsError, SurfaceFrame, CONTACT_THRESHOLD};
use crate::linalg::{Mat3, Vec3, Vec4};
use crate::roots::{solve_bracketed, solve_expanding, BracketConfig, RootError};
use crate::tensors::{energy_momentum_tensor, FluidState, TensorsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShockError {
    #[error("ContactSurface: |u| = {0:e} below contact threshold")]
    ContactSurface(f64),
    #[error("NotSupersonic: upstream Mach = {0}")]
    NotSupersonic(f64),
    #[error("ExpansionShockRejected: {0}")]
    ExpansionShockRejected(&'static str),
    #[error("RootNotBracketed: {0}")]
    RootNotBracketed(String),
    #[error("RatioOutOfRange: ratio = {ratio}, admissible range (1, {max})")]
    RatioOutOfRange { ratio: f64, max: f64 },
    #[error("EnthalpyUnreachable: required h2 = {0}")]
    EnthalpyUnreachable(f64),
    #[error("SingularF: det = {0:e}")]
    SingularF(f64),
    #[error("InconsistentClosure: {0}")]
    InconsistentClosure(&'static str),
    #[error(transparent)]
    Eos(EosError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error(transparent)]
    Tensors(#[from] TensorsError),
}

impl From<EosError> for ShockError {
    fn from(e: EosError) -> Self {
        match e {
            EosError::UnreachableState {
                quantity: "enthalpy",
                value,
                ..
            } => ShockError::EnthalpyUnreachable(value),
            other => ShockError::Eos(other),
        }
    }
}

impl From<RootError> for ShockError {
    fn from(e: RootError) -> Self {
        ShockError::RootNotBracketed(e.to_string())
    }
}

/// Upstream/downstream states with the moving-surface frame and the
/// kinematic closure: deformation gradients, shock-adapted covector `w`,
/// and conserved reference density `f_ref`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShockPair {
    pub up: FluidState,
    pub down: FluidState,
    pub frame: SurfaceFrame,
    pub f_up: Mat3,
    pub f_down: Mat3,
    pub f_ref: f64,
    pub w: Vec3,
}

impl ShockPair {
    /// Builds a pair from two states and a frame, filling the kinematic
    /// closure with the `F_up = I` convention:
    /// `w = -n/u1`, `F_down = I + [v] (x) n/u1`, `f_ref = rho1`.
    ///
    /// The states need not satisfy any jump condition; the closure is purely
    /// kinematic.
    pub fn from_states(
        up: FluidState,
        down: FluidState,
        frame: SurfaceFrame,
    ) -> Result<Self, ShockError> {
        let u1 = frame.relative_velocity(up.v);
        if u1.abs() < CONTACT_THRESHOLD {
            return Err(ShockError::ContactSurface(u1.abs()));
        }
        let w = w_from_deformation(Mat3::IDENTITY, u1, frame.n)?;
        let dv = down.v - up.v;
        let f_down = Mat3::IDENTITY + dv.outer(frame.n / u1);
        Ok(ShockPair {
            up,
            down,
            frame,
            f_up: Mat3::IDENTITY,
            f_down,
            f_ref: up.rho,
            w,
        })
    }

    pub fn u1(&self) -> f64 {
        self.frame.relative_velocity(self.up.v)
    }

    pub fn u2(&self) -> f64 {
        self.frame.relative_velocity(self.down.v)
    }

    /// Checks the closure invariants: unit normal, the shared covector
    /// relation `n*F/u = -w*` on both sides, the rank-1 jump of `F`, and
    /// conservation of the reference density.
    pub fn validate(&self) -> Result<(), ShockError> {
        let tol = 1e-12;
        if (self.frame.n.norm() - 1.0).abs() > tol {
            return Err(ShockError::InconsistentClosure("normal is not unit"));
        }
        let (u1, u2) = (self.u1(), self.u2());
        if u1.abs() < CONTACT_THRESHOLD || u2.abs() < CONTACT_THRESHOLD {
            return Err(ShockError::ContactSurface(u1.abs().min(u2.abs())));
        }
        let w1 = w_from_deformation(self.f_up, u1, self.frame.n)?;
        let w2 = w_from_deformation(self.f_down, u2, self.frame.n)?;
        let scale = self.w.norm_inf().max(1.0);
        if (w1 - self.w).norm_inf() > tol * scale || (w2 - self.w).norm_inf() > tol * scale {
            return Err(ShockError::InconsistentClosure(
                "covector relation n*F/u = -w* violated",
            ));
        }
        let jump_f = self.f_down - self.f_up;
        let expect = (self.down.v - self.up.v).outer(-self.w);
        if (jump_f - expect).norm_inf() > tol * expect.norm_inf().max(1.0) {
            return Err(ShockError::InconsistentClosure("[F] is not [v] (x) n0'"));
        }
        let f1 = self.up.rho * self.f_up.det();
        let f2 = self.down.rho * self.f_down.det();
        let fscale = self.f_ref.abs().max(1.0);
        if (f1 - self.f_ref).abs() > tol * fscale || (f2 - self.f_ref).abs() > tol * fscale {
            return Err(ShockError::InconsistentClosure(
                "reference density jumps across the surface",
            ));
        }
        Ok(())
    }
}

/// Shock residuals, nondimensionalized by upstream scales
/// `{rho1 c1, p1, c1, c1^2}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RhResiduals {
    /// `[rho u] / (rho1 c1)`
    pub mass: f64,
    /// `[p + rho u^2] / p1`
    pub momentum_n: f64,
    /// `([v] - [u] n) / c1`
    pub velocity: Vec3,
    /// `[u^2/2 + h] / c1^2`
    pub energy: f64,
}

impl RhResiduals {
    pub fn norm_inf(&self) -> f64 {
        self.mass
            .abs()
            .max(self.momentum_n.abs())
            .max(self.velocity.norm_inf())
            .max(self.energy.abs())
    }
}

/// Evaluates the four shock conditions on a pair.
pub fn rh_residuals(pair: &ShockPair, eos: &Eos) -> Result<RhResiduals, ShockError> {
    let (u1, u2) = (pair.u1(), pair.u2());
    if u1.abs() < CONTACT_THRESHOLD || u2.abs() < CONTACT_THRESHOLD {
        return Err(ShockError::ContactSurface(u1.abs().min(u2.abs())));
    }
    let t1 = eos.evaluate(pair.up.rho, pair.up.s)?;
    let t2 = eos.evaluate(pair.down.rho, pair.down.s)?;
    let c1 = t1.sound_speed();
    let mass = (pair.down.rho * u2 - pair.up.rho * u1) / (pair.up.rho * c1);
    let momentum_n = ((t2.p + pair.down.rho * u2 * u2) - (t1.p + pair.up.rho * u1 * u1)) / t1.p;
    let velocity = ((pair.down.v - pair.up.v) - pair.frame.n * (u2 - u1)) / c1;
    let energy = ((0.5 * u2 * u2 + t2.h) - (0.5 * u1 * u1 + t1.h)) / (c1 * c1);
    Ok(RhResiduals {
        mass,
        momentum_n,
        velocity,
        energy,
    })
}

/// The space-time surface term `N* [T]` with `N* = (-D_n, n*)`; raw
/// (dimensional) components. Equals
/// `(-[D_n p + (e+p) u], [rho u v* + p n*])`.
pub fn spacetime_surface_term(pair: &ShockPair, eos: &Eos) -> Result<Vec4, ShockError> {
    let t_up = energy_momentum_tensor(&pair.up, eos)?;
    let t_down = energy_momentum_tensor(&pair.down, eos)?;
    let jump = t_up.jump(&t_down);
    Ok(jump.pre_mul(pair.frame.spacetime_normal()))
}

/// [`spacetime_surface_term`] scaled by upstream flux scales: the time slot
/// by `rho1 c1^3`, the space slots by `rho1 c1^2`.
pub fn spacetime_surface_term_scaled(pair: &ShockPair, eos: &Eos) -> Result<Vec4, ShockError> {
    let raw = spacetime_surface_term(pair, eos)?;
    let c1 = eos.evaluate(pair.up.rho, pair.up.s)?.sound_speed();
    let rho_c2 = pair.up.rho * c1 * c1;
    Ok(Vec4::from_time_space(
        raw.time() / (rho_c2 * c1),
        raw.space() / rho_c2,
    ))
}

/// The nontrivial block of the reference surface term `N0* [T0]`, i.e.
/// `-f [v*F + m w*]`; raw components.
pub fn reference_surface_term(pair: &ShockPair, eos: &Eos) -> Result<Vec3, ShockError> {
    let (u1, u2) = (pair.u1(), pair.u2());
    if u1.abs() < CONTACT_THRESHOLD || u2.abs() < CONTACT_THRESHOLD {
        return Err(ShockError::ContactSurface(u1.abs().min(u2.abs())));
    }
    let m1 = pair.up.m(eos)?;
    let m2 = pair.down.m(eos)?;
    let row1 = pair.f_up.pre_mul(pair.up.v) + pair.w * m1;
    let row2 = pair.f_down.pre_mul(pair.down.v) + pair.w * m2;
    Ok(-(row2 - row1) * pair.f_ref)
}

/// [`reference_surface_term`] scaled by `f_ref c1`.
pub fn reference_surface_term_scaled(pair: &ShockPair, eos: &Eos) -> Result<Vec3, ShockError> {
    let raw = reference_surface_term(pair, eos)?;
    let c1 = eos.evaluate(pair.up.rho, pair.up.s)?.sound_speed();
    Ok(raw / (pair.f_ref * c1))
}

/// How the downstream state is prescribed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strength {
    /// Upstream normal Mach number `u1/c1`; must exceed 1.
    Mach(f64),
    /// Downstream pressure; must be at least the upstream pressure.
    DownPressure(f64),
    /// Downstream density; must be at least the upstream density.
    DownDensity(f64),
}

struct HugoniotPoint {
    rho2: f64,
    p2: f64,
    s2: f64,
    /// Mass flux `rho1 u1 = rho2 u2 > 0`.
    j: f64,
}

/// Solves the jump system for the downstream state through the EOS
/// abstraction: at each trial compression the entropy is recovered from the
/// momentum condition and the residual is the energy condition. The density
/// ratio (or downstream pressure) is then root-found by bracketed bisection
/// with secant acceleration.
fn solve_hugoniot(
    up: &FluidState,
    eos: &Eos,
    strength: Strength,
) -> Result<HugoniotPoint, ShockError> {
    let t1 = eos.evaluate(up.rho, up.s)?;
    let (rho1, p1, h1, c1) = (up.rho, t1.p, t1.h, t1.sound_speed());
    let r_max = eos.max_compression_ratio();
    let cfg = BracketConfig {
        f_tol: 1e-14 * h1.abs().max(1.0),
        x_tol: 1e-15,
        max_iter: 200,
    };

    match strength {
        Strength::Mach(m1) => {
            if !(m1 > 1.0) {
                return Err(ShockError::NotSupersonic(m1));
            }
            let j = rho1 * m1 * c1;
            // Energy residual at trial ratio r; r = 1 is the trivial root, so
            // scan geometrically away from it for the shock branch.
            let residual = |r: f64| -> f64 {
                let rho2 = r * rho1;
                let p2 = p1 + j * j * (1.0 / rho1 - 1.0 / rho2);
                let s2 = match eos.entropy_from_pressure(rho2, p2) {
                    Ok(s) => s,
                    Err(_) => return f64::NAN,
                };
                let h2 = match eos.evaluate(rho2, s2) {
                    Ok(t) => t.h,
                    Err(_) => return f64::NAN,
                };
                h2 - h1 - 0.5 * j * j * (1.0 / (rho1 * rho1) - 1.0 / (rho2 * rho2))
            };
            let span = r_max - 1.0;
            let mut lo = 1.0 + 1e-9 * span;
            let f_lo = residual(lo);
            if f_lo.is_nan() {
                return Err(ShockError::RootNotBracketed(format!(
                    "energy residual undefined near the weak-shock limit for Mach {m1}"
                )));
            }
            let mut prev = (lo, f_lo);
            let mut bracket = None;
            let mut step = 1e-9 * span;
            while prev.0 < r_max - 1e-12 * span {
                step *= 2.0;
                let r = (prev.0 + step).min(r_max - 1e-12 * span);
                let f_r = residual(r);
                if f_r.is_nan() {
                    break;
                }
                if f_r == 0.0 || f_r.signum() != prev.1.signum() {
                    bracket = Some((prev.0, r));
                    break;
                }
                prev = (r, f_r);
                if r >= r_max - 1e-12 * span {
                    break;
                }
            }
            let (blo, bhi) = bracket.ok_or_else(|| {
                ShockError::RootNotBracketed(format!(
                    "no shock branch for Mach {m1} in ratio range (1, {r_max})"
                ))
            })?;
            lo = blo;
            let r = solve_bracketed(residual, lo, bhi, &cfg)?;
            let rho2 = r * rho1;
            let p2 = p1 + j * j * (1.0 / rho1 - 1.0 / rho2);
            let s2 = eos.entropy_from_pressure(rho2, p2)?;
            Ok(HugoniotPoint { rho2, p2, s2, j })
        }
        Strength::DownPressure(p2) => {
            if p2 < p1 {
                return Err(ShockError::ExpansionShockRejected(
                    "downstream pressure below upstream",
                ));
            }
            if p2 == p1 {
                return Ok(HugoniotPoint {
                    rho2: rho1,
                    p2: p1,
                    s2: up.s,
                    j: rho1 * c1,
                });
            }
            // Hugoniot energy residual with the mass flux eliminated;
            // strictly decreasing in r on (1, r_max).
            let residual = |r: f64| -> f64 {
                let rho2 = r * rho1;
                let s2 = match eos.entropy_from_pressure(rho2, p2) {
                    Ok(s) => s,
                    Err(_) => return f64::NAN,
                };
                let h2 = match eos.evaluate(rho2, s2) {
                    Ok(t) => t.h,
                    Err(_) => return f64::NAN,
                };
                h2 - h1 - 0.5 * (p2 - p1) * (1.0 / rho1 + 1.0 / rho2)
            };
            let span = r_max - 1.0;
            let r = solve_bracketed(residual, 1.0 + 1e-14 * span, r_max - 1e-13 * span, &cfg)?;
            let rho2 = r * rho1;
            let s2 = eos.entropy_from_pressure(rho2, p2)?;
            let j = ((p2 - p1) / (1.0 / rho1 - 1.0 / rho2)).sqrt();
            Ok(HugoniotPoint { rho2, p2, s2, j })
        }
        Strength::DownDensity(rho2) => {
            if rho2 < rho1 {
                return Err(ShockError::ExpansionShockRejected(
                    "downstream density below upstream",
                ));
            }
            if rho2 == rho1 {
                return Ok(HugoniotPoint {
                    rho2: rho1,
                    p2: p1,
                    s2: up.s,
                    j: rho1 * c1,
                });
            }
            let r = rho2 / rho1;
            if r >= r_max {
                return Err(ShockError::RootNotBracketed(format!(
                    "ratio {r} at or beyond the strong-shock limit {r_max}"
                )));
            }
            // Energy residual as a function of downstream pressure;
            // strictly increasing for r < r_max.
            let residual = |p2: f64| -> f64 {
                let s2 = match eos.entropy_from_pressure(rho2, p2) {
                    Ok(s) => s,
                    Err(_) => return f64::NAN,
                };
                let h2 = match eos.evaluate(rho2, s2) {
                    Ok(t) => t.h,
                    Err(_) => return f64::NAN,
                };
                h2 - h1 - 0.5 * (p2 - p1) * (1.0 / rho1 + 1.0 / rho2)
            };
            let p2 = solve_expanding(residual, p1, 2.0 * p1, 1e12 * p1, &cfg)?;
            let s2 = eos.entropy_from_pressure(rho2, p2)?;
            let j = ((p2 - p1) / (1.0 / rho1 - 1.0 / rho2)).sqrt();
            Ok(HugoniotPoint { rho2, p2, s2, j })
        }
    }
}

/// Solves the downstream state of a shock from the upstream state and a
/// strength parameter.
///
/// The surface speed is realized from the solution: `D_n = n.v1 - u1`, so the
/// frame's `d_n` input is advisory. Tangential velocity is preserved exactly;
/// the kinematic closure is filled with the `F_up = I` convention.
pub fn solve_downstream(
    up: &FluidState,
    eos: &Eos,
    frame: &SurfaceFrame,
    strength: Strength,
) -> Result<ShockPair, ShockError> {
    let pt = solve_hugoniot(up, eos, strength)?;
    let u1 = pt.j / up.rho;
    let u2 = pt.j / pt.rho2;
    let realized = SurfaceFrame {
        n: frame.n,
        d_n: frame.n.dot(up.v) - u1,
    };
    let down = FluidState {
        rho: pt.rho2,
        v: up.v + realized.n * (u2 - u1),
        s: pt.s2,
        omega: up.omega,
    };
    if down.s < up.s - 1e-12 {
        return Err(ShockError::ExpansionShockRejected(
            "entropy would decrease across the shock",
        ));
    }
    ShockPair::from_states(*up, down, realized)
}

/// One sample of the Hugoniot locus.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HugoniotSample {
    pub rho2: f64,
    pub p2: f64,
    pub u2: f64,
    pub s2: f64,
    /// Surface speed that realizes this point for the given upstream state.
    pub d_n_implied: f64,
}

/// Sweeps the one-parameter family of downstream states reachable from
/// `up` at the given density ratios.
pub fn hugoniot_locus(
    up: &FluidState,
    eos: &Eos,
    frame: &SurfaceFrame,
    density_ratios: &[f64],
) -> Result<Vec<HugoniotSample>, ShockError> {
    let r_max = eos.max_compression_ratio();
    let mut out = Vec::with_capacity(density_ratios.len());
    for &ratio in density_ratios {
        if !(ratio > 1.0 && ratio < r_max) {
            return Err(ShockError::RatioOutOfRange { ratio, max: r_max });
        }
        let pt = solve_hugoniot(up, eos, Strength::DownDensity(ratio * up.rho))?;
        let u1 = pt.j / up.rho;
        out.push(HugoniotSample {
            rho2: pt.rho2,
            p2: pt.p2,
            u2: pt.j / pt.rho2,
            s2: pt.s2,
            d_n_implied: frame.n.dot(up.v) - u1,
        });
    }
    Ok(out)
}

/// Lax admissibility and entropy diagnostics for a pair.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LaxReport {
    /// `u1 > c1` and `0 < u2 < c2`.
    pub admissible: bool,
    pub upstream_mach: f64,
    pub downstream_mach: f64,
    /// `s2 - s1`.
    pub entropy_jump: f64,
    /// All jumps negligible: the pair is not a shock at all.
    pub zero_strength: bool,
}

pub fn lax_admissible(pair: &ShockPair, eos: &Eos) -> Result<LaxReport, ShockError> {
    let t1 = eos.evaluate(pair.up.rho, pair.up.s)?;
    let t2 = eos.evaluate(pair.down.rho, pair.down.s)?;
    let (u1, u2) = (pair.u1(), pair.u2());
    let (c1, c2) = (t1.sound_speed(), t2.sound_speed());
    let zero_strength = (pair.down.rho - pair.up.rho).abs() / pair.up.rho < 1e-12
        && (u2 - u1).abs() / c1 < 1e-12
        && (t2.p - t1.p).abs() / t1.p < 1e-12;
    Ok(LaxReport {
        admissible: !zero_strength && u1 > c1 && u2 > 0.0 && u2 < c2,
        upstream_mach: u1 / c1,
        downstream_mach: u2 / c2,
        entropy_jump: pair.down.s - pair.up.s,
        zero_strength,
    })
}

/// Builds a pair satisfying exactly the reference-variation conditions
/// `[rho u] = 0`, `[v] = [u] n`, `[u^2/2 + h] = 0` at a prescribed
/// downstream density, leaving `[p + rho u^2]` generically nonzero.
///
/// The upstream relative speed comes from the given frame; the downstream
/// entropy is recovered in closed form from the required enthalpy.
pub fn construct_crh2_pair(
    up: &FluidState,
    eos: &Eos,
    frame: &SurfaceFrame,
    rho2: f64,
) -> Result<ShockPair, ShockError> {
    let u1 = frame.relative_velocity(up.v);
    if u1.abs() < CONTACT_THRESHOLD {
        return Err(ShockError::ContactSurface(u1.abs()));
    }
    let t1 = eos.evaluate(up.rho, up.s)?;
    let u2 = up.rho * u1 / rho2;
    let h2 = t1.h + 0.5 * (u1 * u1 - u2 * u2);
    let s2 = eos.entropy_from_enthalpy(rho2, h2)?;
    let down = FluidState {
        rho: rho2,
        v: up.v + frame.n * (u2 - u1),
        s: s2,
        omega: up.omega,
    };
    ShockPair::from_states(*up, down, *frame)
}

/// Residuals of the two determinant identities behind `[rho u] = 0`:
///
/// 1. the rank-1 lemma `det(1 + K L*) = 1 + L*K` applied to
///    `K = [v]`, `L* = n0p* F1^{-1}`, and
/// 2. `det F2 / det F1 = u2 / u1` with `F2 = F1 + [v] (x) n0p`.
pub fn det_jump_identity(
    f1: Mat3,
    dv: Vec3,
    n0p: Vec3,
    u1: f64,
    u2: f64,
) -> Result<(f64, f64), ShockError> {
    let det1 = f1.det();
    let scale = f1.norm_inf().max(1e-300);
    if det1.abs() < 1e-14 * scale * scale * scale {
        return Err(ShockError::SingularF(det1));
    }
    let f1_inv = f1.inverse().ok_or(ShockError::SingularF(det1))?;
    let l = f1_inv.pre_mul(n0p);
    let lemma = (Mat3::IDENTITY + dv.outer(l)).det() - (1.0 + l.dot(dv));
    let f2 = f1 + dv.outer(n0p);
    let ratio = f2.det() / det1 - u2 / u1;
    Ok((lemma.abs(), ratio.abs()))
}

/// Informational contact-surface check: across a surface with `u = 0` the
/// pressure and normal velocity must be continuous while density and
/// tangential velocity may jump. Outside the scope of the shock conditions,
/// which require `u != 0`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ContactReport {
    pub pressure_jump: f64,
    pub normal_velocity_jump: f64,
    pub is_contact: bool,
}

pub fn contact_conditions(
    up: &FluidState,
    down: &FluidState,
    frame: &SurfaceFrame,
    eos: &Eos,
) -> Result<ContactReport, ShockError> {
    let t1 = eos.evaluate(up.rho, up.s)?;
    let t2 = eos.evaluate(down.rho, down.s)?;
    let pressure_jump = t2.p - t1.p;
    let normal_velocity_jump = frame.n.dot(down.v) - frame.n.dot(up.v);
    let c1 = t1.sound_speed();
    Ok(ContactReport {
        pressure_jump,
        normal_velocity_jump,
        is_contact: frame.relative_velocity(up.v).abs() < CONTACT_THRESHOLD
            && pressure_jump.abs() < 1e-10 * t1.p
            && normal_velocity_jump.abs() < 1e-10 * c1,
    })
}
