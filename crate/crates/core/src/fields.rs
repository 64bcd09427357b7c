//! Smooth assignments `(t, x) -> (rho, v, s, Omega)` used by the
//! finite-difference residual machinery, plus the manufactured fields the
//! verification suite relies on.

use serde::{Deserialize, Serialize};

use crate::eos::Eos;
use crate::linalg::Vec3;
use crate::tensors::FluidState;

/// A smooth field of fluid states over space-time.
///
/// Implementations must be evaluable on a stencil neighborhood of any query
/// point; evaluation must be re-entrant.
pub trait SmoothField {
    fn sample(&self, t: f64, x: Vec3) -> FluidState;
}

impl<F: Fn(f64, Vec3) -> FluidState> SmoothField for F {
    fn sample(&self, t: f64, x: Vec3) -> FluidState {
        self(t, x)
    }
}

/// Uniform constant state.
pub struct UniformField(pub FluidState);

impl SmoothField for UniformField {
    fn sample(&self, _t: f64, _x: Vec3) -> FluidState {
        self.0
    }
}

/// Steady density perturbation `rho = 1 + a sin(k x1)` at rest; not a
/// solution of the motion equations unless `a = 0`.
pub struct DensitySine {
    pub amplitude: f64,
    pub wavenumber: f64,
}

impl SmoothField for DensitySine {
    fn sample(&self, _t: f64, x: Vec3) -> FluidState {
        FluidState {
            rho: 1.0 + self.amplitude * (self.wavenumber * x[0]).sin(),
            v: Vec3::ZERO,
            s: 0.0,
            omega: 0.0,
        }
    }
}

/// Exact 1-D isentropic simple wave moving right into a uniform state.
///
/// The velocity solves `u = U0(x - (c0 + (gamma+1)/2 u) t)` with
/// `U0(xi) = a sin(k xi)`; density follows from the constant left Riemann
/// invariant `u - 2c/(gamma-1)`. Valid before characteristic crossing, i.e.
/// for `t` well below `2 / ((gamma+1) a k)`.
pub struct SimpleWave {
    gamma: f64,
    k_eos: f64,
    c_v: f64,
    s0: f64,
    c0: f64,
    pub amplitude: f64,
    pub wavenumber: f64,
}

impl SimpleWave {
    /// Builds a wave of the given amplitude on the quiescent state
    /// `(rho0, s0)` of an ideal-gas EOS.
    pub fn new(eos: &Eos, rho0: f64, s0: f64, amplitude: f64, wavenumber: f64) -> Self {
        let (gamma, c_v, k_eos) = match *eos {
            Eos::IdealGas { gamma, c_v, k } => (gamma, c_v, k),
            Eos::StiffenedGas { gamma, c_v, k, .. } => (gamma, c_v, k),
        };
        let c0 = (gamma * k_eos * rho0.powf(gamma - 1.0) * (s0 / c_v).exp()).sqrt();
        SimpleWave {
            gamma,
            k_eos,
            c_v,
            s0,
            c0,
            amplitude,
            wavenumber,
        }
    }

    fn initial_profile(&self, xi: f64) -> f64 {
        self.amplitude * (self.wavenumber * xi).sin()
    }

    fn initial_profile_deriv(&self, xi: f64) -> f64 {
        self.amplitude * self.wavenumber * (self.wavenumber * xi).cos()
    }

    /// Solves the implicit characteristic relation by Newton iteration.
    fn velocity(&self, t: f64, x: f64) -> f64 {
        let lam = |u: f64| self.c0 + 0.5 * (self.gamma + 1.0) * u;
        let mut u = self.initial_profile(x - self.c0 * t);
        for _ in 0..50 {
            let xi = x - lam(u) * t;
            let g = u - self.initial_profile(xi);
            let dg = 1.0 + self.initial_profile_deriv(xi) * 0.5 * (self.gamma + 1.0) * t;
            let step = g / dg;
            u -= step;
            if step.abs() < 1e-15 * (1.0 + u.abs()) {
                break;
            }
        }
        u
    }
}

impl SmoothField for SimpleWave {
    fn sample(&self, t: f64, x: Vec3) -> FluidState {
        let u = self.velocity(t, x[0]);
        // constant left invariant: c = c0 + (gamma-1)/2 u
        let c = self.c0 + 0.5 * (self.gamma - 1.0) * u;
        let rho = (c * c / (self.gamma * self.k_eos * (self.s0 / self.c_v).exp()))
            .powf(1.0 / (self.gamma - 1.0));
        FluidState {
            rho,
            v: Vec3::new(u, 0.0, 0.0),
            s: self.s0,
            omega: 0.0,
        }
    }
}

/// Exact entropy-wave solution: constant velocity and pressure, with
/// density and entropy profiles advected at the flow speed.
///
/// `s = s_amp sin(k (x1 - v t))` and `rho` chosen so the pressure stays at
/// `p0`; every bulk equation is satisfied exactly.
pub struct EntropyWave {
    pub speed: f64,
    pub p0: f64,
    pub s_amplitude: f64,
    pub wavenumber: f64,
    gamma: f64,
    k_eos: f64,
    c_v: f64,
    p_inf: f64,
}

impl EntropyWave {
    pub fn new(eos: &Eos, speed: f64, p0: f64, s_amplitude: f64, wavenumber: f64) -> Self {
        let (gamma, c_v, k_eos, p_inf) = match *eos {
            Eos::IdealGas { gamma, c_v, k } => (gamma, c_v, k, 0.0),
            Eos::StiffenedGas {
                gamma,
                c_v,
                k,
                p_inf,
            } => (gamma, c_v, k, p_inf),
        };
        EntropyWave {
            speed,
            p0,
            s_amplitude,
            wavenumber,
            gamma,
            k_eos,
            c_v,
            p_inf,
        }
    }
}

impl SmoothField for EntropyWave {
    fn sample(&self, t: f64, x: Vec3) -> FluidState {
        let xi = x[0] - self.speed * t;
        let s = self.s_amplitude * (self.wavenumber * xi).sin();
        // isobar: K rho^gamma e^(s/c_v) = p0 + gamma p_inf
        let shifted = self.p0 + self.gamma * self.p_inf;
        let rho = (shifted * (-s / self.c_v).exp() / self.k_eos).powf(1.0 / self.gamma);
        FluidState {
            rho,
            v: Vec3::new(self.speed, 0.0, 0.0),
            s,
            omega: 0.0,
        }
    }
}

/// One trigonometric or monomial term of an [`AnalyticField`] component.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldTerm {
    /// `amp * sin(k.x - omega t + phase)`
    Sin {
        amp: f64,
        k: [f64; 3],
        #[serde(default)]
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `amp * cos(k.x - omega t + phase)`
    Cos {
        amp: f64,
        k: [f64; 3],
        #[serde(default)]
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `amp * t^pt * x1^p1 * x2^p2 * x3^p3`
    Poly {
        amp: f64,
        #[serde(default)]
        pt: u8,
        #[serde(default)]
        px: [u8; 3],
    },
}

impl FieldTerm {
    fn eval(&self, t: f64, x: Vec3) -> f64 {
        match *self {
            FieldTerm::Sin {
                amp,
                k,
                omega,
                phase,
            } => amp * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2] - omega * t + phase).sin(),
            FieldTerm::Cos {
                amp,
                k,
                omega,
                phase,
            } => amp * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2] - omega * t + phase).cos(),
            FieldTerm::Poly { amp, pt, px } => {
                amp * t.powi(pt as i32)
                    * x[0].powi(px[0] as i32)
                    * x[1].powi(px[1] as i32)
                    * x[2].powi(px[2] as i32)
            }
        }
    }
}

/// One scalar component: a constant plus a sum of terms.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub terms: Vec<FieldTerm>,
}

impl ComponentSpec {
    pub fn constant(c: f64) -> Self {
        ComponentSpec {
            constant: c,
            terms: Vec::new(),
        }
    }

    fn eval(&self, t: f64, x: Vec3) -> f64 {
        self.constant + self.terms.iter().map(|term| term.eval(t, x)).sum::<f64>()
    }
}

/// Field assembled from per-component coefficient lists; serializable, so it
/// doubles as the JSON field-spec format of the command-line tool.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticField {
    pub rho: ComponentSpec,
    pub v: [ComponentSpec; 3],
    pub s: ComponentSpec,
    #[serde(default)]
    pub omega: ComponentSpec,
}

impl SmoothField for AnalyticField {
    fn sample(&self, t: f64, x: Vec3) -> FluidState {
        FluidState {
            rho: self.rho.eval(t, x),
            v: Vec3::new(
                self.v[0].eval(t, x),
                self.v[1].eval(t, x),
                self.v[2].eval(t, x),
            ),
            s: self.s.eval(t, x),
            omega: self.omega.eval(t, x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal() -> Eos {
        Eos::ideal_gas(1.4, 1.0, 1.0).unwrap()
    }

    #[test]
    fn simple_wave_reduces_to_initial_profile_at_t0() {
        let w = SimpleWave::new(&ideal(), 1.0, 0.0, 0.05, 1.0);
        let st = w.sample(0.0, Vec3::new(0.3, 0.0, 0.0));
        assert!((st.v[0] - 0.05 * 0.3f64.sin()).abs() < 1e-14);
        assert_eq!(st.s, 0.0);
    }

    #[test]
    fn simple_wave_velocity_satisfies_characteristic_relation() {
        let w = SimpleWave::new(&ideal(), 1.0, 0.0, 0.05, 1.0);
        let (t, x) = (0.3, 0.25);
        let u = w.velocity(t, x);
        let lam = w.c0 + 0.5 * (w.gamma + 1.0) * u;
        assert!((u - w.initial_profile(x - lam * t)).abs() < 1e-13);
    }

    #[test]
    fn entropy_wave_is_isobaric() {
        for eos in [ideal(), Eos::stiffened_gas(1.4, 1.0, 1.0, 0.5).unwrap()] {
            let w = EntropyWave::new(&eos, 0.7, 1.0, 0.1, 1.3);
            for &(t, x1) in &[(0.0, 0.1), (0.4, -0.3), (1.0, 2.0)] {
                let st = w.sample(t, Vec3::new(x1, 0.0, 0.0));
                let p = eos.evaluate(st.rho, st.s).unwrap().p;
                assert!((p - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn analytic_field_json_roundtrip() {
        let json = r#"{
            "rho": {"constant": 1.0, "terms": [{"kind":"sin","amp":0.1,"k":[1.0,0,0]}]},
            "v": [{"constant":0.0}, {"constant":0.0}, {"constant":0.0}],
            "s": {"constant": 0.0}
        }"#;
        let f: AnalyticField = serde_json::from_str(json).unwrap();
        let st = f.sample(0.0, Vec3::new(0.5, 0.0, 0.0));
        assert!((st.rho - (1.0 + 0.1 * 0.5f64.sin())).abs() < 1e-15);
        assert_eq!(st.omega, 0.0);
    }
}
