//! Energy-momentum tensor assembly and bulk equation residuals.
//!
//! In the space-time picture the tensor and force covector are
//!
//! ```text
//! T = ( -e        rho v*          )      F* = -rho dOmega/dz
//!     ( -(e+p)v   rho v v* + p 1 )
//! ```
//!
//! with total volume energy `e = rho (v^2/2 + alpha + Omega)`. The covector
//! `F* - Div T` vanishes on motions; its time slot is the energy equation and
//! its space slots are (minus) the momentum equations. The reference-space
//! counterpart is `T0 = f(X) ((0, -v*F - m w*), (0, m mu 1))` with
//! `m = v^2/2 - h - Omega`.
//!
//! Residuals of smooth fields are evaluated by central finite differences on
//! the primitive fields; second order by default, fourth order available
//! where equivalence checks need headroom below their tolerance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eos::{Eos, EosError};
use crate::fields::SmoothField;
use crate::linalg::{Mat3, Mat4, Vec3, Vec4};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorsError {
    #[error("NonPositiveDensity: rho = {0}")]
    NonPositiveDensity(f64),
    #[error("NonPositiveReferenceDensity: f = {0}")]
    NonPositiveReferenceDensity(f64),
    #[error("StencilOutOfDomain: rho = {rho} at (t = {t}, x = {x:?})")]
    StencilOutOfDomain { t: f64, x: [f64; 3], rho: f64 },
    #[error(transparent)]
    Eos(#[from] EosError),
}

/// Fluid state in Euler variables. Thermodynamic quantities are derived
/// through an [`Eos`]; `omega` is the specific body-force potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluidState {
    pub rho: f64,
    pub v: Vec3,
    pub s: f64,
    #[serde(default)]
    pub omega: f64,
}

impl FluidState {
    pub fn new(rho: f64, v: Vec3, s: f64) -> Self {
        FluidState {
            rho,
            v,
            s,
            omega: 0.0,
        }
    }

    pub fn kinetic(&self) -> f64 {
        0.5 * self.v.dot(self.v)
    }

    /// `m = v^2/2 - h - Omega`, the density derivative of the Lagrangian.
    pub fn m(&self, eos: &Eos) -> Result<f64, TensorsError> {
        let t = eos.evaluate(self.rho, self.s)?;
        Ok(self.kinetic() - t.h - self.omega)
    }
}

/// 4x4 space-time tensor with `(time, space)` block semantics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpaceTimeTensor(pub Mat4);

impl SpaceTimeTensor {
    pub fn time_time(&self) -> f64 {
        self.0.time_time()
    }

    pub fn time_space(&self) -> Vec3 {
        self.0.time_space()
    }

    pub fn space_time(&self) -> Vec3 {
        self.0.space_time()
    }

    pub fn space_space(&self) -> Mat3 {
        self.0.space_space()
    }

    /// Applies a space-time covector from the left: `N* T`.
    pub fn pre_mul(&self, n: Vec4) -> Vec4 {
        self.0.pre_mul(n)
    }

    pub fn jump(&self, other: &SpaceTimeTensor) -> SpaceTimeTensor {
        SpaceTimeTensor(other.0 - self.0)
    }
}

/// Total volume energy `e = rho (v^2/2 + alpha + Omega)`.
pub fn energy_density(state: &FluidState, eos: &Eos) -> Result<f64, TensorsError> {
    if !(state.rho > 0.0) {
        return Err(TensorsError::NonPositiveDensity(state.rho));
    }
    let t = eos.evaluate(state.rho, state.s)?;
    Ok(state.rho * (state.kinetic() + t.alpha + state.omega))
}

/// Assembles the energy-momentum tensor `T` of a fluid state.
pub fn energy_momentum_tensor(
    state: &FluidState,
    eos: &Eos,
) -> Result<SpaceTimeTensor, TensorsError> {
    if !(state.rho > 0.0) {
        return Err(TensorsError::NonPositiveDensity(state.rho));
    }
    let t = eos.evaluate(state.rho, state.s)?;
    let e = state.rho * (state.kinetic() + t.alpha + state.omega);
    let ss = state.v.outer(state.v) * state.rho + Mat3::IDENTITY * t.p;
    Ok(SpaceTimeTensor(Mat4::from_blocks(
        -e,
        state.v * state.rho,
        state.v * (-(e + t.p)),
        ss,
    )))
}

/// Assembles the reference-space tensor
/// `T0 = f ((0, -v*F - m w*), (0, m mu 1))`.
pub fn reference_tensor(
    state: &FluidState,
    f: Mat3,
    mu: f64,
    w: Vec3,
    f_ref: f64,
    eos: &Eos,
) -> Result<SpaceTimeTensor, TensorsError> {
    if !(f_ref > 0.0) {
        return Err(TensorsError::NonPositiveReferenceDensity(f_ref));
    }
    let m = state.m(eos)?;
    let row = -(f.pre_mul(state.v) + w * m);
    Ok(SpaceTimeTensor(Mat4::from_blocks(
        0.0,
        row * f_ref,
        Vec3::ZERO,
        Mat3::IDENTITY * (m * mu * f_ref),
    )))
}

/// Body-force covector `(-rho dOmega/dt, -rho dOmega/dx)`.
pub fn body_force(state: &FluidState, d_omega_dt: f64, grad_omega: Vec3) -> Vec4 {
    Vec4::from_time_space(-state.rho * d_omega_dt, -grad_omega * state.rho)
}

/// Central finite-difference scheme for field derivatives.
#[derive(Debug, Clone, Copy)]
pub struct FdScheme {
    pub step: f64,
    pub fourth_order: bool,
}

impl FdScheme {
    /// Second-order scheme at the default step.
    pub const DEFAULT: FdScheme = FdScheme {
        step: 1e-4,
        fourth_order: false,
    };

    pub fn second_order(step: f64) -> Self {
        FdScheme {
            step,
            fourth_order: false,
        }
    }

    pub fn fourth_order(step: f64) -> Self {
        FdScheme {
            step,
            fourth_order: true,
        }
    }

    fn derivative(&self, f: &mut dyn FnMut(f64) -> f64, x: f64) -> f64 {
        let h = self.step;
        if self.fourth_order {
            (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
        } else {
            (f(x + h) - f(x - h)) / (2.0 * h)
        }
    }
}

/// Residuals of the bulk equations at a point, all O(h^2)-accurate
/// (O(h^4) under a fourth-order scheme).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MotionResiduals {
    /// `de/dt + div((e+p)v) - rho dOmega/dt`
    pub energy: f64,
    /// `d(rho v*)/dt + div(rho v v* + p 1) + rho dOmega/dx`, a covector.
    pub momentum: Vec3,
    /// `a + grad(h + Omega) - theta grad s`.
    pub thermo: Vec3,
    /// Material derivative of entropy, `ds/dt + v . grad s`.
    pub entropy: f64,
}

struct Stencil<'a> {
    field: &'a dyn SmoothField,
    eos: &'a Eos,
    fd: FdScheme,
    t: f64,
    x: Vec3,
}

impl<'a> Stencil<'a> {
    /// Checks every sample the scheme will touch; a nonpositive density
    /// anywhere on the stencil makes the point unusable.
    fn check_domain(&self) -> Result<(), TensorsError> {
        let reach = if self.fd.fourth_order { 2 } else { 1 };
        let probe = |t: f64, x: Vec3| -> Result<(), TensorsError> {
            let st = self.field.sample(t, x);
            if !(st.rho > 0.0) {
                return Err(TensorsError::StencilOutOfDomain {
                    t,
                    x: x.0,
                    rho: st.rho,
                });
            }
            Ok(())
        };
        probe(self.t, self.x)?;
        for k in 1..=reach {
            let d = k as f64 * self.fd.step;
            probe(self.t + d, self.x)?;
            probe(self.t - d, self.x)?;
            for axis in 0..3 {
                let mut xp = self.x;
                let mut xm = self.x;
                xp[axis] += d;
                xm[axis] -= d;
                probe(self.t, xp)?;
                probe(self.t, xm)?;
            }
        }
        Ok(())
    }

    /// d/dt of a scalar functional of the state.
    fn ddt(&self, g: &dyn Fn(&FluidState, &Eos) -> f64) -> f64 {
        self.fd
            .derivative(&mut |t| g(&self.field.sample(t, self.x), self.eos), self.t)
    }

    /// d/dx_axis of a scalar functional of the state.
    fn ddx(&self, axis: usize, g: &dyn Fn(&FluidState, &Eos) -> f64) -> f64 {
        self.fd.derivative(
            &mut |xi| {
                let mut x = self.x;
                x[axis] = xi;
                g(&self.field.sample(self.t, x), self.eos)
            },
            self.x[axis],
        )
    }

    fn grad(&self, g: &dyn Fn(&FluidState, &Eos) -> f64) -> Vec3 {
        Vec3::new(self.ddx(0, g), self.ddx(1, g), self.ddx(2, g))
    }
}

fn pressure(st: &FluidState, eos: &Eos) -> f64 {
    eos.evaluate(st.rho, st.s).map(|t| t.p).unwrap_or(f64::NAN)
}

fn total_energy(st: &FluidState, eos: &Eos) -> f64 {
    match eos.evaluate(st.rho, st.s) {
        Ok(t) => st.rho * (st.kinetic() + t.alpha + st.omega),
        Err(_) => f64::NAN,
    }
}

/// Evaluates the four bulk residuals at `(t, x)` with the given scheme.
pub fn motion_residuals(
    field: &dyn SmoothField,
    eos: &Eos,
    t: f64,
    x: Vec3,
    fd: FdScheme,
) -> Result<MotionResiduals, TensorsError> {
    let st = Stencil {
        field,
        eos,
        fd,
        t,
        x,
    };
    st.check_domain()?;
    let center = field.sample(t, x);
    let thermo_center = eos.evaluate(center.rho, center.s)?;

    // energy: de/dt + div((e+p)v) - rho dOmega/dt
    let d_omega_dt = st.ddt(&|s, _| s.omega);
    let mut energy = st.ddt(&total_energy) - center.rho * d_omega_dt;
    for i in 0..3 {
        energy += st.ddx(i, &move |s, e| {
            (total_energy(s, e) + pressure(s, e)) * s.v[i]
        });
    }

    // momentum_j: d(rho v_j)/dt + sum_i d_i(rho v_i v_j + p delta_ij) + rho d_j Omega
    let grad_omega = st.grad(&|s, _| s.omega);
    let mut momentum = Vec3::ZERO;
    for j in 0..3 {
        let mut r = st.ddt(&move |s, _| s.rho * s.v[j]);
        for i in 0..3 {
            r += st.ddx(i, &move |s, e| {
                s.rho * s.v[i] * s.v[j] + if i == j { pressure(s, e) } else { 0.0 }
            });
        }
        momentum[j] = r + center.rho * grad_omega[j];
    }

    // thermo: a + grad(h + Omega) - theta grad s
    let grad_s = st.grad(&|s, _| s.s);
    let grad_h = st.grad(&|s, e| e.evaluate(s.rho, s.s).map(|t| t.h).unwrap_or(f64::NAN));
    let mut thermo = Vec3::ZERO;
    for j in 0..3 {
        let mut a_j = st.ddt(&move |s, _| s.v[j]);
        for i in 0..3 {
            a_j += center.v[i] * st.ddx(i, &move |s, _| s.v[j]);
        }
        thermo[j] = a_j + grad_h[j] + grad_omega[j] - thermo_center.theta * grad_s[j];
    }

    // entropy: ds/dt + v . grad s
    let entropy = st.ddt(&|s, _| s.s) + center.v.dot(grad_s);

    Ok(MotionResiduals {
        energy,
        momentum,
        thermo,
        entropy,
    })
}

/// Evaluates `F* - Div T` at `(t, x)` by differencing the assembled tensor.
///
/// The contraction runs over the row index: `(Div T)_j = sum_i d_i T[i][j]`.
/// Componentwise, the result equals `(+energy, -momentum)` from
/// [`motion_residuals`]; both routes difference the same fluxes, so they
/// agree to rounding when evaluated with the same scheme.
pub fn divergence_residual(
    field: &dyn SmoothField,
    eos: &Eos,
    t: f64,
    x: Vec3,
    fd: FdScheme,
) -> Result<Vec4, TensorsError> {
    let st = Stencil {
        field,
        eos,
        fd,
        t,
        x,
    };
    st.check_domain()?;
    let center = field.sample(t, x);

    let entry = |s: &FluidState, e: &Eos, i: usize, j: usize| -> f64 {
        match energy_momentum_tensor(s, e) {
            Ok(tensor) => tensor.0[(i, j)],
            Err(_) => f64::NAN,
        }
    };

    let mut div = Vec4::ZERO;
    for j in 0..4 {
        let mut acc = st.ddt(&move |s, e| entry(s, e, 0, j));
        for i in 0..3 {
            acc += st.ddx(i, &move |s, e| entry(s, e, 1 + i, j));
        }
        div.0[j] = acc;
    }

    let d_omega_dt = st.ddt(&|s, _| s.omega);
    let grad_omega = st.grad(&|s, _| s.omega);
    let force = body_force(&center, d_omega_dt, grad_omega);

    Ok(force - div)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{DensitySine, EntropyWave, SimpleWave, UniformField};

    fn ideal() -> Eos {
        Eos::ideal_gas(1.4, 1.0, 1.0).unwrap()
    }

    #[test]
    fn energy_density_examples() {
        let eos = ideal();
        let e = energy_density(&FluidState::new(1.0, Vec3::ZERO, 0.0), &eos).unwrap();
        assert!((e - 2.5).abs() < 1e-14);
        let e = energy_density(&FluidState::new(1.0, Vec3::new(2.0, 0.0, 0.0), 0.0), &eos).unwrap();
        assert!((e - 4.5).abs() < 1e-14);
        // with body-force potential, against the eos evaluation directly
        let st = FluidState {
            rho: 2.0,
            v: Vec3::new(1.0, 1.0, 0.0),
            s: 0.0,
            omega: 1.0,
        };
        let alpha = eos.evaluate(2.0, 0.0).unwrap().alpha;
        let e = energy_density(&st, &eos).unwrap();
        assert!((e - 2.0 * (1.0 + alpha + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn tensor_at_rest_is_diagonal() {
        let eos = ideal();
        let t = energy_momentum_tensor(&FluidState::new(1.0, Vec3::ZERO, 0.0), &eos).unwrap();
        let expect = Mat4::from_blocks(-2.5, Vec3::ZERO, Vec3::ZERO, Mat3::IDENTITY);
        assert!((t.0 - expect).norm_inf() < 1e-15);
    }

    #[test]
    fn tensor_blocks_match_formulas() {
        let eos = ideal();
        let st = FluidState::new(1.0, Vec3::new(1.0, 0.0, 0.0), 0.0);
        let t = energy_momentum_tensor(&st, &eos).unwrap();
        // e = 1*(0.5 + 2.5) = 3, p = 1
        assert!((t.0[(1, 1)] - 2.0).abs() < 1e-15);
        assert!((t.0[(1, 0)] - (-4.0)).abs() < 1e-15);
        assert!((t.0[(0, 0)] - (-3.0)).abs() < 1e-15);
    }

    #[test]
    fn tensor_block_exactness_random_state() {
        let eos = ideal();
        let st = FluidState {
            rho: 1.7,
            v: Vec3::new(0.4, -0.2, 0.9),
            s: 0.13,
            omega: 0.25,
        };
        let tp = eos.evaluate(st.rho, st.s).unwrap();
        let e = st.rho * (st.kinetic() + tp.alpha + st.omega);
        let t = energy_momentum_tensor(&st, &eos).unwrap();
        assert!((t.time_time() - (-e)).abs() < 1e-14 * e.abs());
        assert!((t.time_space() - st.v * st.rho).norm_inf() < 1e-14);
        assert!((t.space_time() - st.v * (-(e + tp.p))).norm_inf() < 1e-13);
        let ss = t.space_space();
        let want = st.v.outer(st.v) * st.rho + Mat3::IDENTITY * tp.p;
        assert!((ss - want).norm_inf() < 1e-14);
        // symmetric space block
        assert!((ss - ss.transpose()).norm_inf() == 0.0);
    }

    #[test]
    fn reference_tensor_at_rest() {
        let eos = ideal();
        let st = FluidState::new(1.0, Vec3::ZERO, 0.0);
        let m0 = st.m(&eos).unwrap();
        let t0 = reference_tensor(&st, Mat3::IDENTITY, 1.0, Vec3::ZERO, 1.0, &eos).unwrap();
        let expect = Mat4::from_blocks(0.0, Vec3::ZERO, Vec3::ZERO, Mat3::IDENTITY * m0);
        assert!((t0.0 - expect).norm_inf() < 1e-15);
    }

    #[test]
    fn reference_tensor_rejects_nonpositive_f() {
        let eos = ideal();
        let st = FluidState::new(1.0, Vec3::ZERO, 0.0);
        assert!(matches!(
            reference_tensor(&st, Mat3::IDENTITY, 1.0, Vec3::ZERO, 0.0, &eos),
            Err(TensorsError::NonPositiveReferenceDensity(_))
        ));
    }

    #[test]
    fn body_force_examples() {
        let st = FluidState::new(2.0, Vec3::ZERO, 0.0);
        assert_eq!(body_force(&st, 0.0, Vec3::ZERO), Vec4::ZERO);
        let f = body_force(&st, 0.0, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(f, Vec4([0.0, -2.0, 0.0, 0.0]));
        // uniform gravity Omega = g x3
        let g = 9.81;
        let st = FluidState::new(1.0, Vec3::ZERO, 0.0);
        let f = body_force(&st, 0.0, Vec3::new(0.0, 0.0, g));
        assert_eq!(f, Vec4([0.0, 0.0, 0.0, -g]));
    }

    #[test]
    fn residuals_vanish_on_constant_state() {
        let eos = ideal();
        let field = UniformField(FluidState::new(1.3, Vec3::ZERO, 0.1));
        let r = motion_residuals(
            &field,
            &eos,
            0.2,
            Vec3::new(0.1, 0.0, -0.3),
            FdScheme::DEFAULT,
        )
        .unwrap();
        assert!(r.energy.abs() < 1e-12);
        assert!(r.momentum.norm_inf() < 1e-12);
        assert!(r.thermo.norm_inf() < 1e-12);
        assert!(r.entropy.abs() < 1e-12);
    }

    #[test]
    fn residuals_vanish_on_rigid_translation() {
        let eos = ideal();
        let field = UniformField(FluidState::new(1.0, Vec3::new(0.7, -0.1, 0.2), 0.0));
        let r = motion_residuals(&field, &eos, 0.0, Vec3::ZERO, FdScheme::DEFAULT).unwrap();
        assert!(r.energy.abs() < 1e-12);
        assert!(r.momentum.norm_inf() < 1e-12);
        assert!(r.thermo.norm_inf() < 1e-12);
        assert!(r.entropy.abs() < 1e-12);
    }

    #[test]
    fn simple_wave_residuals_converge_at_second_order() {
        let eos = ideal();
        let wave = SimpleWave::new(&eos, 1.0, 0.0, 0.05, 1.0);
        let point = Vec3::new(0.25, 0.0, 0.0);
        let norm = |h: f64| {
            let r = motion_residuals(&wave, &eos, 0.3, point, FdScheme::second_order(h)).unwrap();
            (r.energy.powi(2) + r.momentum.dot(r.momentum) + r.thermo.dot(r.thermo)).sqrt()
        };
        let r1 = norm(1e-2);
        let r2 = norm(5e-3);
        let r3 = norm(2.5e-3);
        let slope12 = (r1 / r2).log2();
        let slope23 = (r2 / r3).log2();
        assert!(
            (slope12 - 2.0).abs() < 0.1 && (slope23 - 2.0).abs() < 0.1,
            "slopes {slope12} {slope23} (residuals {r1:e} {r2:e} {r3:e})"
        );
    }

    #[test]
    fn entropy_residual_converges_at_second_order() {
        let eos = ideal();
        let wave = EntropyWave::new(&eos, 0.7, 1.0, 0.1, 1.3);
        let point = Vec3::new(0.2, 0.0, 0.0);
        let res = |h: f64| {
            motion_residuals(&wave, &eos, 0.4, point, FdScheme::second_order(h))
                .unwrap()
                .entropy
                .abs()
        };
        let (r1, r2) = (res(1e-2), res(5e-3));
        let slope = (r1 / r2).log2();
        assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
    }

    #[test]
    fn divergence_residual_constant_state() {
        let eos = ideal();
        let field = UniformField(FluidState::new(1.0, Vec3::new(0.3, 0.0, 0.0), 0.0));
        let r = divergence_residual(&field, &eos, 0.0, Vec3::ZERO, FdScheme::DEFAULT).unwrap();
        assert!(r.norm_inf() < 1e-12);
    }

    #[test]
    fn divergence_residual_density_sine() {
        // rho = 1 + 0.1 sin x at rest: time slot 0, space slot -dp/dx.
        let eos = ideal();
        let field = DensitySine {
            amplitude: 0.1,
            wavenumber: 1.0,
        };
        let x = Vec3::new(0.4, 0.0, 0.0);
        let r = divergence_residual(&field, &eos, 0.0, x, FdScheme::DEFAULT).unwrap();
        assert!(r.time().abs() < 1e-12);
        // analytic dp/dx for p = K rho^gamma: gamma rho^(gamma-1) * 0.1 cos(x)
        let rho = 1.0 + 0.1 * 0.4f64.sin();
        let dpdx = 1.4 * rho.powf(0.4) * 0.1 * 0.4f64.cos();
        assert!(
            (r.space()[0] + dpdx).abs() < 1e-7,
            "space slot {} vs -dp/dx {}",
            r.space()[0],
            -dpdx
        );
        assert!(r.space()[1].abs() < 1e-12 && r.space()[2].abs() < 1e-12);
    }

    #[test]
    fn divergence_matches_motion_residuals() {
        // (F* - Div T) = (+energy, -momentum), both routes on one scheme.
        let eos = ideal();
        let field = |t: f64, x: Vec3| FluidState {
            rho: 1.0 + 0.2 * (0.5 * x[0] - 0.3 * t).sin() + 0.1 * (0.4 * x[1]).cos(),
            v: Vec3::new(
                0.3 * (0.4 * x[0] + 0.2 * t).sin(),
                0.2 * (0.3 * x[1]).cos(),
                0.1 * (0.2 * x[2] - 0.1 * t).sin(),
            ),
            s: 0.1 * (0.3 * x[0]).sin() + 0.05 * (0.2 * t).cos(),
            omega: 0.2 * (0.25 * x[1] + 0.1 * t).sin(),
        };
        let (t, x) = (0.3, Vec3::new(0.2, -0.1, 0.4));
        let fd = FdScheme::DEFAULT;
        let dt = divergence_residual(&field, &eos, t, x, fd).unwrap();
        let mr = motion_residuals(&field, &eos, t, x, fd).unwrap();
        let expect = Vec4::from_time_space(mr.energy, -mr.momentum);
        assert!(
            (dt - expect).norm_inf() < 1e-10,
            "divergence {dt:?} vs residuals {expect:?}"
        );
    }

    #[test]
    fn stencil_leaving_domain_is_reported() {
        let eos = ideal();
        // density crosses zero just off the query point
        let field = |_t: f64, x: Vec3| FluidState::new(1e-6 - x[0], Vec3::ZERO, 0.0);
        let err = motion_residuals(&field, &eos, 0.0, Vec3::ZERO, FdScheme::DEFAULT).unwrap_err();
        assert!(matches!(err, TensorsError::StencilOutOfDomain { .. }));
    }
}
