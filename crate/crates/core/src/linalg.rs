//! Small fixed-size vectors and matrices (3-D space, 4-D space-time).
//!
//! Row-major storage throughout. Covectors (forms) are stored as `Vec3`/`Vec4`
//! and applied from the left via [`Mat3::pre_mul`] / [`Mat4::pre_mul`].

// elimination loops read a pivot row while mutating another; index form keeps
// the borrows simple
#![allow(clippy::needless_range_loop)]

use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vec3(pub [f64; 3]);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vec4(pub [f64; 4]);

/// 3x3 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mat3(pub [[f64; 3]; 3]);

/// 4x4 matrix, row-major. Block semantics (time slot first) are imposed by
/// the call sites, not by this type.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mat4(pub [[f64; 4]; 4]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n < 1e-300 {
            None
        } else {
            Some(self / n)
        }
    }

    /// Outer product `self (x) other`: rows scale with `self`, columns with `other`.
    pub fn outer(self, other: Vec3) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.0[i] * other.0[j];
            }
        }
        Mat3(m)
    }

    pub fn norm_inf(self) -> f64 {
        self.0.iter().fold(0.0, |a, x| a.max(x.abs()))
    }
}

impl Vec4 {
    pub const ZERO: Vec4 = Vec4([0.0; 4]);

    /// Space-time vector from a time slot and a spatial part.
    pub fn from_time_space(t: f64, s: Vec3) -> Self {
        Vec4([t, s.0[0], s.0[1], s.0[2]])
    }

    pub fn time(self) -> f64 {
        self.0[0]
    }

    pub fn space(self) -> Vec3 {
        Vec3([self.0[1], self.0[2], self.0[3]])
    }

    pub fn dot(self, other: Vec4) -> f64 {
        (0..4).map(|i| self.0[i] * other.0[i]).sum()
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(self) -> f64 {
        self.0.iter().fold(0.0, |a, x| a.max(x.abs()))
    }
}

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);

    /// Matrix-vector product `M v`.
    pub fn mul_vec(self, v: Vec3) -> Vec3 {
        let m = &self.0;
        Vec3([
            m[0][0] * v.0[0] + m[0][1] * v.0[1] + m[0][2] * v.0[2],
            m[1][0] * v.0[0] + m[1][1] * v.0[1] + m[1][2] * v.0[2],
            m[2][0] * v.0[0] + m[2][1] * v.0[1] + m[2][2] * v.0[2],
        ])
    }

    /// Covector application `a* M` (row vector times matrix).
    pub fn pre_mul(self, a: Vec3) -> Vec3 {
        let m = &self.0;
        Vec3([
            a.0[0] * m[0][0] + a.0[1] * m[1][0] + a.0[2] * m[2][0],
            a.0[0] * m[0][1] + a.0[1] * m[1][1] + a.0[2] * m[2][1],
            a.0[0] * m[0][2] + a.0[1] * m[1][2] + a.0[2] * m[2][2],
        ])
    }

    pub fn transpose(self) -> Mat3 {
        let m = &self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn det(self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Inverse via the adjugate; `None` when the determinant vanishes.
    pub fn inverse(self) -> Option<Mat3> {
        let d = self.det();
        if d.abs() < 1e-300 {
            return None;
        }
        let m = &self.0;
        let adj = Mat3([
            [
                m[1][1] * m[2][2] - m[1][2] * m[2][1],
                m[0][2] * m[2][1] - m[0][1] * m[2][2],
                m[0][1] * m[1][2] - m[0][2] * m[1][1],
            ],
            [
                m[1][2] * m[2][0] - m[1][0] * m[2][2],
                m[0][0] * m[2][2] - m[0][2] * m[2][0],
                m[0][2] * m[1][0] - m[0][0] * m[1][2],
            ],
            [
                m[1][0] * m[2][1] - m[1][1] * m[2][0],
                m[0][1] * m[2][0] - m[0][0] * m[2][1],
                m[0][0] * m[1][1] - m[0][1] * m[1][0],
            ],
        ]);
        Some(adj * (1.0 / d))
    }

    pub fn mat_mul(self, other: Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..3).map(|k| self.0[i][k] * other.0[k][j]).sum();
            }
        }
        Mat3(out)
    }

    /// Rank estimate with a relative singular-entry threshold; used by tests
    /// on rank-1 jump matrices.
    pub fn rank(self, tol: f64) -> usize {
        // Gaussian elimination with partial pivoting.
        let mut m = self.0;
        let scale = m
            .iter()
            .flatten()
            .fold(0.0f64, |a, x| a.max(x.abs()))
            .max(1.0);
        let mut rank = 0;
        for col in 0..3 {
            let piv = (rank..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()));
            let piv = match piv {
                Some(p) => p,
                None => break,
            };
            if m[piv][col].abs() <= tol * scale {
                continue;
            }
            m.swap(rank, piv);
            for r in (rank + 1)..3 {
                let f = m[r][col] / m[rank][col];
                for c in col..3 {
                    m[r][c] -= f * m[rank][c];
                }
            }
            rank += 1;
            if rank == 3 {
                break;
            }
        }
        rank
    }

    /// Rotation by `angle` about `axis` (Rodrigues formula).
    pub fn rotation(axis: Vec3, angle: f64) -> Option<Mat3> {
        let k = axis.normalized()?;
        let (s, c) = angle.sin_cos();
        let kx = Mat3([
            [0.0, -k.0[2], k.0[1]],
            [k.0[2], 0.0, -k.0[0]],
            [-k.0[1], k.0[0], 0.0],
        ]);
        Some(Mat3::IDENTITY + kx * s + kx.mat_mul(kx) * (1.0 - c))
    }

    pub fn norm_inf(self) -> f64 {
        self.0.iter().flatten().fold(0.0, |a, x| a.max(x.abs()))
    }
}

impl Mat4 {
    pub const IDENTITY: Mat4 = Mat4([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);

    /// Assemble from space-time blocks: scalar time-time `a`, time-space row
    /// `b*`, space-time column `c`, and space-space block `d`.
    pub fn from_blocks(a: f64, b: Vec3, c: Vec3, d: Mat3) -> Mat4 {
        let mut m = [[0.0; 4]; 4];
        m[0][0] = a;
        for j in 0..3 {
            m[0][1 + j] = b.0[j];
            m[1 + j][0] = c.0[j];
            for k in 0..3 {
                m[1 + j][1 + k] = d.0[j][k];
            }
        }
        Mat4(m)
    }

    pub fn time_time(self) -> f64 {
        self.0[0][0]
    }

    pub fn time_space(self) -> Vec3 {
        Vec3([self.0[0][1], self.0[0][2], self.0[0][3]])
    }

    pub fn space_time(self) -> Vec3 {
        Vec3([self.0[1][0], self.0[2][0], self.0[3][0]])
    }

    pub fn space_space(self) -> Mat3 {
        let m = &self.0;
        Mat3([
            [m[1][1], m[1][2], m[1][3]],
            [m[2][1], m[2][2], m[2][3]],
            [m[3][1], m[3][2], m[3][3]],
        ])
    }

    pub fn mul_vec(self, v: Vec4) -> Vec4 {
        let mut out = [0.0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.0[i][j] * v.0[j]).sum();
        }
        Vec4(out)
    }

    /// Covector application `a* M`.
    pub fn pre_mul(self, a: Vec4) -> Vec4 {
        let mut out = [0.0; 4];
        for (j, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|i| a.0[i] * self.0[i][j]).sum();
        }
        Vec4(out)
    }

    pub fn mat_mul(self, other: Mat4) -> Mat4 {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..4).map(|k| self.0[i][k] * other.0[k][j]).sum();
            }
        }
        Mat4(out)
    }

    pub fn transpose(self) -> Mat4 {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.0[j][i];
            }
        }
        Mat4(out)
    }

    /// Gauss-Jordan inverse with partial pivoting; `None` when singular.
    pub fn inverse(self) -> Option<Mat4> {
        let mut a = self.0;
        let mut inv = Mat4::IDENTITY.0;
        for col in 0..4 {
            let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
            if a[piv][col].abs() < 1e-300 {
                return None;
            }
            a.swap(col, piv);
            inv.swap(col, piv);
            let d = a[col][col];
            for c in 0..4 {
                a[col][c] /= d;
                inv[col][c] /= d;
            }
            for r in 0..4 {
                if r == col {
                    continue;
                }
                let f = a[r][col];
                if f == 0.0 {
                    continue;
                }
                for c in 0..4 {
                    a[r][c] -= f * a[col][c];
                    inv[r][c] -= f * inv[col][c];
                }
            }
        }
        Some(Mat4(inv))
    }

    pub fn det(self) -> f64 {
        // LU with partial pivoting.
        let mut a = self.0;
        let mut det = 1.0;
        for col in 0..4 {
            let piv = match (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())) {
                Some(p) => p,
                None => return 0.0,
            };
            if a[piv][col] == 0.0 {
                return 0.0;
            }
            if piv != col {
                a.swap(col, piv);
                det = -det;
            }
            det *= a[col][col];
            for r in (col + 1)..4 {
                let f = a[r][col] / a[col][col];
                for c in col..4 {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
        det
    }

    pub fn norm_inf(self) -> f64 {
        self.0.iter().flatten().fold(0.0, |a, x| a.max(x.abs()))
    }
}

macro_rules! elementwise {
    ($ty:ty, $n:expr) => {
        impl Add for $ty {
            type Output = Self;
            fn add(self, o: Self) -> Self {
                let mut r = self;
                for i in 0..$n {
                    r.0[i] += o.0[i];
                }
                r
            }
        }
        impl Sub for $ty {
            type Output = Self;
            fn sub(self, o: Self) -> Self {
                let mut r = self;
                for i in 0..$n {
                    r.0[i] -= o.0[i];
                }
                r
            }
        }
        impl Mul<f64> for $ty {
            type Output = Self;
            fn mul(self, k: f64) -> Self {
                let mut r = self;
                for i in 0..$n {
                    r.0[i] *= k;
                }
                r
            }
        }
        impl Div<f64> for $ty {
            type Output = Self;
            fn div(self, k: f64) -> Self {
                let mut r = self;
                for i in 0..$n {
                    r.0[i] /= k;
                }
                r
            }
        }
        impl Neg for $ty {
            type Output = Self;
            fn neg(self) -> Self {
                self * -1.0
            }
        }
    };
}

elementwise!(Vec3, 3);
elementwise!(Vec4, 4);

macro_rules! matrix_elementwise {
    ($ty:ty, $n:expr) => {
        impl Add for $ty {
            type Output = Self;
            fn add(self, o: Self) -> Self {
                let mut r = self;
                for i in 0..$n {
                    for j in 0..$n {
                        r.0[i][j] += o.0[i][j];
                    }
                }
                r
            }
        }
        impl Sub for $ty {
            type Output = Self;
            fn sub(self, o: Self) -> Self {
                let mut r = self;
                for i in 0..$n {
                    for j in 0..$n {
                        r.0[i][j] -= o.0[i][j];
                    }
                }
                r
            }
        }
        impl Mul<f64> for $ty {
            type Output = Self;
            fn mul(self, k: f64) -> Self {
                let mut r = self;
                for i in 0..$n {
                    for j in 0..$n {
                        r.0[i][j] *= k;
                    }
                }
                r
            }
        }
    };
}

matrix_elementwise!(Mat3, 3);
matrix_elementwise!(Mat4, 4);

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}
impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}
impl Index<usize> for Vec4 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}
impl Index<(usize, usize)> for Mat3 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}
impl Index<(usize, usize)> for Mat4 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}
