//! Tangent-map algebra in the 4-D space-time, moving-surface frames, jump
//! geometry, and the mapping between the two virtual-displacement pictures.
//!
//! The tangent map of a motion `z = Phi(Z)` decomposes into blocks
//!
//! ```text
//! B = ( mu   w* )      dt = mu dlambda + w* dX
//!     ( r    B3 )      dx = r  dlambda + B3 dX
//! ```
//!
//! Eliminating `dlambda` yields the fluid velocity `v = r/mu` and the spatial
//! deformation gradient `F = B3 - v w*`. A moving surface carries the
//! space-time normal form `N* = (-D_n, n*)`; the normal fluid speed relative
//! to the surface is `u = n.v - D_n`. On a shock-adapted parametrization the
//! surface covector satisfies `n*F/u = n0*/u0 = -w*`, which ties the two
//! pictures together across a discontinuity.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Mat3, Mat4, Vec3, Vec4};

/// Relative normal speeds below this threshold are treated as a contact
/// surface: the shock-adapted covector `w = -n*F/u` is then undefined.
pub const CONTACT_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("DegenerateParametrization: mu = 0")]
    DegenerateParametrization,
    #[error("SingularTangentMap")]
    SingularTangentMap,
    #[error("ZeroRelativeVelocity: |u| = {0:e} below contact threshold")]
    ZeroRelativeVelocity(f64),
    #[error("DegenerateNormal: |n| = {0:e}")]
    DegenerateNormal(f64),
}

/// Blocks of the 4x4 tangent map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentMap {
    /// dt/dlambda.
    pub mu: f64,
    /// dt/dX, a covector.
    pub w: Vec3,
    /// dx/dlambda.
    pub r: Vec3,
    /// dx/dX.
    pub b3: Mat3,
}

/// Velocity and deformation gradient derived from a tangent map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Motion4Velocity {
    /// Fluid velocity `v = r/mu`.
    pub v: Vec3,
    /// Deformation gradient `F = B3 - v w*`.
    pub f: Mat3,
}

impl Motion4Velocity {
    /// The space-time velocity `(1, v)`.
    pub fn four_velocity(&self) -> Vec4 {
        Vec4::from_time_space(1.0, self.v)
    }
}

/// Unit normal and normal speed of the moving surface section `S_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceFrame {
    /// Unit normal, oriented from upstream (side 1) to downstream (side 2).
    pub n: Vec3,
    /// Normal speed of the surface.
    pub d_n: f64,
}

impl SurfaceFrame {
    /// Builds a frame, normalizing `n`.
    pub fn new(n: Vec3, d_n: f64) -> Result<Self, KinematicsError> {
        let norm = n.norm();
        let n = n
            .normalized()
            .ok_or(KinematicsError::DegenerateNormal(norm))?;
        Ok(SurfaceFrame { n, d_n })
    }

    /// Normal fluid speed relative to the surface, `u = n.v - D_n`.
    pub fn relative_velocity(&self, v: Vec3) -> f64 {
        self.n.dot(v) - self.d_n
    }

    /// Tangential part of a velocity, `v - (n.v) n`.
    pub fn tangential(&self, v: Vec3) -> Vec3 {
        v - self.n * self.n.dot(v)
    }

    /// The space-time normal form `N* = (-D_n, n*)`.
    pub fn spacetime_normal(&self) -> Vec4 {
        Vec4::from_time_space(-self.d_n, self.n)
    }
}

/// Reference-side surface data: the scaled normal `n0* / u0` and the
/// reference normal speed `u0 = -D_{n0}`.
///
/// Invariant: `n0p = -w` for the shock-adapted parametrization covector `w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceFrame {
    /// `n0*/u0`, equal to `-w*`.
    pub n0p: Vec3,
    /// Reference-side normal speed.
    pub u0: f64,
}

impl ReferenceFrame {
    /// Derives the reference frame from the shock-adapted covector `w`,
    /// taking the orientation with `u0 > 0`.
    pub fn from_shock_covector(w: Vec3) -> Result<Self, KinematicsError> {
        let norm = w.norm();
        if norm < 1e-300 {
            return Err(KinematicsError::ZeroRelativeVelocity(0.0));
        }
        Ok(ReferenceFrame {
            n0p: -w,
            u0: 1.0 / norm,
        })
    }

    /// Unit normal of the reference surface.
    pub fn n0(&self) -> Vec3 {
        self.n0p * self.u0
    }
}

/// Splits a 4x4 tangent map into its blocks and the derived velocity and
/// deformation gradient.
pub fn decompose_tangent_map(b4: Mat4) -> Result<(TangentMap, Motion4Velocity), KinematicsError> {
    let mu = b4.time_time();
    if mu == 0.0 {
        return Err(KinematicsError::DegenerateParametrization);
    }
    let w = b4.time_space();
    let r = b4.space_time();
    let b3 = b4.space_space();
    let v = r / mu;
    let f = b3 - v.outer(w);
    Ok((TangentMap { mu, w, r, b3 }, Motion4Velocity { v, f }))
}

/// Inverse of [`decompose_tangent_map`]: rebuilds the 4x4 map from
/// `(mu, w, v, F)` with `r = mu v` and `B3 = F + v w*`.
pub fn assemble_tangent_map(mu: f64, w: Vec3, v: Vec3, f: Mat3) -> Result<Mat4, KinematicsError> {
    if mu == 0.0 {
        return Err(KinematicsError::DegenerateParametrization);
    }
    Ok(Mat4::from_blocks(mu, w, v * mu, f + v.outer(w)))
}

/// Shock-adapted parametrization covector: `w* = -(n*F)/u`.
pub fn w_from_deformation(f: Mat3, u: f64, n: Vec3) -> Result<Vec3, KinematicsError> {
    if u.abs() < CONTACT_THRESHOLD {
        return Err(KinematicsError::ZeroRelativeVelocity(u.abs()));
    }
    Ok(-f.pre_mul(n) / u)
}

/// Rank-1 deformation-gradient jump `[F] = [v] (x) n0p`.
///
/// Satisfies `[v] w* + [F] = O` with `w* = -n0p*`.
pub fn jump_deformation(dv: Vec3, n0p: Vec3) -> Mat3 {
    dv.outer(n0p)
}

/// Maps a space-time virtual displacement to the reference space:
/// `zeta_hat = -B^{-1} zeta_tilde`, from `zeta_tilde + B zeta_hat = 0`.
pub fn map_variation(b4: Mat4, zeta_tilde: Vec4) -> Result<Vec4, KinematicsError> {
    let inv = b4.inverse().ok_or(KinematicsError::SingularTangentMap)?;
    Ok(-inv.mul_vec(zeta_tilde))
}

/// Inverse mapping: `zeta_tilde = -B zeta_hat`.
pub fn map_variation_inverse(b4: Mat4, zeta_hat: Vec4) -> Vec4 {
    -b4.mul_vec(zeta_hat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_map_decomposes_trivially() {
        let (tm, mv) = decompose_tangent_map(Mat4::IDENTITY).unwrap();
        assert_eq!(tm.mu, 1.0);
        assert_eq!(tm.w, Vec3::ZERO);
        assert_eq!(mv.v, Vec3::ZERO);
        assert_eq!(mv.f, Mat3::IDENTITY);
    }

    #[test]
    fn lambda_equals_t_form() {
        // First row (1, 0*): the lambda = t case recovers v and F directly.
        let v = Vec3::new(1.0, 0.0, 0.0);
        let a4 = Mat4::from_blocks(1.0, Vec3::ZERO, v, Mat3::IDENTITY);
        let (tm, mv) = decompose_tangent_map(a4).unwrap();
        assert_eq!(tm.w, Vec3::ZERO);
        assert_eq!(mv.v, v);
        assert_eq!(mv.f, Mat3::IDENTITY);
    }

    #[test]
    fn general_map_against_block_arithmetic() {
        // mu=2, w=(0.1,0,0), r=(1,0,0), B3=I: v = r/mu, F = B3 - v w*.
        let b4 = Mat4::from_blocks(
            2.0,
            Vec3::new(0.1, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Mat3::IDENTITY,
        );
        let (tm, mv) = decompose_tangent_map(b4).unwrap();
        assert_eq!(mv.v, Vec3::new(0.5, 0.0, 0.0));
        let f_expect = Mat3::IDENTITY - Vec3::new(0.5, 0.0, 0.0).outer(Vec3::new(0.1, 0.0, 0.0));
        assert_eq!(mv.f, f_expect);
        assert!((mv.f[(0, 0)] - 0.95).abs() < 1e-15);
        // assemble is the exact inverse
        let back = assemble_tangent_map(tm.mu, tm.w, mv.v, mv.f).unwrap();
        assert_eq!(back, b4);
    }

    #[test]
    fn assemble_identity() {
        let m = assemble_tangent_map(1.0, Vec3::ZERO, Vec3::ZERO, Mat3::IDENTITY).unwrap();
        assert_eq!(m, Mat4::IDENTITY);
    }

    #[test]
    fn degenerate_mu_rejected() {
        let b4 = Mat4::from_blocks(0.0, Vec3::ZERO, Vec3::ZERO, Mat3::IDENTITY);
        assert_eq!(
            decompose_tangent_map(b4).unwrap_err(),
            KinematicsError::DegenerateParametrization
        );
        assert!(assemble_tangent_map(0.0, Vec3::ZERO, Vec3::ZERO, Mat3::IDENTITY).is_err());
    }

    #[test]
    fn relative_velocity_cases() {
        let f = SurfaceFrame::new(Vec3::new(1.0, 0.0, 0.0), 0.0).unwrap();
        assert_eq!(f.relative_velocity(Vec3::ZERO), 0.0);
        let f = SurfaceFrame::new(Vec3::new(1.0, 0.0, 0.0), 1.0).unwrap();
        assert_eq!(f.relative_velocity(Vec3::new(3.0, 2.0, 0.0)), 2.0);
        let f = SurfaceFrame::new(Vec3::new(0.0, 1.0, 0.0), -0.5).unwrap();
        assert_eq!(f.relative_velocity(Vec3::new(1.0, 0.25, 0.0)), 0.75);
    }

    #[test]
    fn frame_normalizes_input() {
        let f = SurfaceFrame::new(Vec3::new(3.0, 4.0, 0.0), 0.2).unwrap();
        assert!((f.n.norm() - 1.0).abs() < 1e-14);
        assert!(SurfaceFrame::new(Vec3::ZERO, 0.0).is_err());
    }

    #[test]
    fn w_from_identity_deformation() {
        let w = w_from_deformation(Mat3::IDENTITY, 1.0, Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(w, Vec3::new(-1.0, 0.0, 0.0));
        let w = w_from_deformation(Mat3::IDENTITY * 2.0, 4.0, Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(w, Vec3::new(-0.5, 0.0, 0.0));
    }

    #[test]
    fn w_covector_roundtrip() {
        // -w* u recovers the row n*F.
        let f = Mat3([[1.1, 0.2, -0.1], [0.0, 0.9, 0.3], [0.2, 0.1, 1.4]]);
        let n = Vec3::new(0.6, -0.8, 0.0);
        let u = 1.7;
        let w = w_from_deformation(f, u, n).unwrap();
        let back = -w * u;
        let row = f.pre_mul(n);
        assert!((back - row).norm_inf() < 1e-15);
    }

    #[test]
    fn contact_surface_rejected() {
        assert!(matches!(
            w_from_deformation(Mat3::IDENTITY, 1e-11, Vec3::new(1.0, 0.0, 0.0)),
            Err(KinematicsError::ZeroRelativeVelocity(_))
        ));
    }

    #[test]
    fn jump_deformation_cases() {
        assert_eq!(
            jump_deformation(Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0)),
            Mat3::ZERO
        );
        let m = jump_deformation(Vec3::new(1.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(m[(0, 0)], 1.0);
        assert_eq!(m.rank(1e-14), 1);
    }

    #[test]
    fn jump_deformation_rank_and_row_space() {
        let dv = Vec3::new(0.3, -1.2, 0.7);
        let n0p = Vec3::new(0.5, 0.1, -0.9);
        let m = jump_deformation(dv, n0p);
        assert!(m.rank(1e-12) <= 1);
        // every row is a multiple of n0p
        for i in 0..3 {
            let row = Vec3::new(m[(i, 0)], m[(i, 1)], m[(i, 2)]);
            let cross = Vec3::new(
                row[1] * n0p[2] - row[2] * n0p[1],
                row[2] * n0p[0] - row[0] * n0p[2],
                row[0] * n0p[1] - row[1] * n0p[0],
            );
            assert!(cross.norm_inf() < 1e-14);
        }
        // discontinuity relation: [v] w* + [F] = O with w* = -n0p*
        let residual = dv.outer(-n0p) + m;
        assert!(residual.norm_inf() < 1e-15);
    }

    #[test]
    fn variation_map_identity() {
        let zeta = Vec4([1.0, 0.0, 0.0, 0.0]);
        let hat = map_variation(Mat4::IDENTITY, zeta).unwrap();
        assert_eq!(hat, Vec4([-1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn variation_map_roundtrip() {
        let b4 = Mat4::from_blocks(
            1.3,
            Vec3::new(0.2, -0.1, 0.05),
            Vec3::new(0.4, 0.1, -0.3),
            Mat3([[1.0, 0.2, 0.0], [0.0, 1.1, 0.1], [0.3, 0.0, 0.9]]),
        );
        let zeta = Vec4([0.3, -1.1, 0.7, 0.2]);
        let hat = map_variation(b4, zeta).unwrap();
        let back = map_variation_inverse(b4, hat);
        assert!((back - zeta).norm_inf() < 1e-14);
        // defining relation
        let residual = zeta + b4.mul_vec(hat);
        assert!(residual.norm_inf() < 1e-14);
    }

    #[test]
    fn singular_map_rejected() {
        let mut rows = [[0.0; 4]; 4];
        rows[0][0] = 1.0;
        assert!(matches!(
            map_variation(Mat4(rows), Vec4([1.0, 0.0, 0.0, 0.0])),
            Err(KinematicsError::SingularTangentMap)
        ));
    }

    #[test]
    fn reference_frame_from_covector() {
        // F = I, u1 = 2, n = e1: w = -n/u1, and the reference normal is n.
        let n = Vec3::new(1.0, 0.0, 0.0);
        let w = w_from_deformation(Mat3::IDENTITY, 2.0, n).unwrap();
        let rf = ReferenceFrame::from_shock_covector(w).unwrap();
        assert!((rf.n0p - (-w)).norm_inf() == 0.0);
        assert!((rf.u0 - 2.0).abs() < 1e-15);
        assert!((rf.n0() - n).norm_inf() < 1e-15);
    }
}
