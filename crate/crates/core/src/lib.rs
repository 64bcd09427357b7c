//! Space-time variational machinery for conservative fluids.
//!
//! The crate assembles energy-momentum tensors in the 4-D space-time and in
//! the 4-D reference space, handles moving-surface jump geometry, and
//! evaluates both variational routes to the Rankine-Hugoniot conditions:
//!
//! - the space-time surface term `N*[T]`, whose vanishing is equivalent to
//!   the full Rankine-Hugoniot set (mass, momentum, energy), and
//! - the reference-space surface term `-f [v*F + m w*]`, whose vanishing
//!   misses the normal-momentum condition `[p + rho u^2] = 0`.
//!
//! The gap between the two routes can be exhibited numerically with
//! [`shock::construct_crh2_pair`], which builds jump data satisfying the
//! reference-space conditions exactly while violating momentum conservation.
//!
//! Supporting machinery: a closed-form equation-of-state layer ([`eos`]),
//! tangent-map algebra and virtual-displacement mapping ([`kinematics`]),
//! finite-difference residuals of the bulk equations on smooth fields
//! ([`tensors`], [`fields`]), and an exact 1-D Riemann solver ([`riemann`])
//! that consumes the shock relations end to end.
//!
//! All quantities are nondimensional.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with nonpositive
// values, which `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eos;
pub mod fields;
pub mod kinematics;
pub mod linalg;
pub mod riemann;
pub mod roots;
pub mod shock;
pub mod tensors;

pub use eos::{Eos, EosError, ThermoPoint};
pub use kinematics::{Motion4Velocity, ReferenceFrame, SurfaceFrame, TangentMap};
pub use linalg::{Mat3, Mat4, Vec3, Vec4};
pub use shock::ShockPair;
pub use tensors::{FluidState, SpaceTimeTensor};
