//! Cross-checks the closed-form reference tensor against its defining
//! variational formula `T0 = -det(B) (dL/dB) B`, with the Lagrangian
//! derivative evaluated by finite differences.
//!
//! The Lagrangian is `L = rho v^2/2 - rho alpha(rho, s) - rho Omega` with
//! `rho = f mu / det(B)` and `v = r / mu`; `f`, `s`, `Omega` are held fixed
//! while the tangent map varies. The derivative follows the transposed-index
//! convention `(dL/dB)^i_j = dL/dB^j_i`.

use rhkit_core::eos::Eos;
use rhkit_core::kinematics::decompose_tangent_map;
use rhkit_core::linalg::{Mat3, Mat4, Vec3};
use rhkit_core::tensors::{reference_tensor, FluidState};

struct LagrangianSetup {
    eos: Eos,
    f_ref: f64,
    s: f64,
    omega: f64,
}

impl LagrangianSetup {
    fn density(&self, b4: Mat4) -> f64 {
        self.f_ref * b4.time_time() / b4.det()
    }

    fn lagrangian(&self, b4: Mat4) -> f64 {
        let rho = self.density(b4);
        let v = b4.space_time() / b4.time_time();
        let alpha = self.eos.evaluate(rho, self.s).unwrap().alpha;
        0.5 * rho * v.dot(v) - rho * alpha - rho * self.omega
    }

    /// `T0 = -det(B) (dL/dB) B` with the derivative by central differences.
    fn reference_tensor_fd(&self, b4: Mat4, step: f64) -> Mat4 {
        let mut grad = [[0.0; 4]; 4];
        for (i, row) in grad.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let mut plus = b4;
                plus.0[i][j] += step;
                let mut minus = b4;
                minus.0[i][j] -= step;
                *e = (self.lagrangian(plus) - self.lagrangian(minus)) / (2.0 * step);
            }
        }
        Mat4(grad).transpose().mat_mul(b4) * (-b4.det())
    }
}

#[test]
fn reference_tensor_matches_variational_definition() {
    let setup = LagrangianSetup {
        eos: Eos::ideal_gas(1.4, 1.0, 1.0).unwrap(),
        f_ref: 1.3,
        s: 0.2,
        omega: 0.4,
    };
    // general parametrization: mu != 1, w != 0
    let b4 = Mat4::from_blocks(
        1.3,
        Vec3::new(0.2, -0.1, 0.05),
        Vec3::new(0.4, 0.1, -0.3),
        Mat3([[1.05, 0.1, -0.05], [0.02, 0.95, 0.08], [-0.04, 0.06, 1.1]]),
    );
    let (tm, mv) = decompose_tangent_map(b4).unwrap();
    let state = FluidState {
        rho: setup.density(b4),
        v: mv.v,
        s: setup.s,
        omega: setup.omega,
    };
    let closed = reference_tensor(&state, mv.f, tm.mu, tm.w, setup.f_ref, &setup.eos).unwrap();
    let fd = setup.reference_tensor_fd(b4, 1e-5);
    let scale = closed.0.norm_inf().max(1.0);
    let diff = (closed.0 - fd).norm_inf();
    assert!(
        diff < 1e-6 * scale,
        "closed form and variational FD disagree by {diff:e}\nclosed: {closed:?}\nfd: {fd:?}"
    );
}

#[test]
fn reference_tensor_lambda_t_case() {
    let setup = LagrangianSetup {
        eos: Eos::ideal_gas(1.4, 1.0, 1.0).unwrap(),
        f_ref: 0.9,
        s: -0.1,
        omega: 0.0,
    };
    let b4 = Mat4::from_blocks(
        1.0,
        Vec3::ZERO,
        Vec3::new(0.6, -0.2, 0.1),
        Mat3([[1.2, 0.0, 0.1], [0.05, 0.9, 0.0], [0.0, -0.1, 1.05]]),
    );
    let (tm, mv) = decompose_tangent_map(b4).unwrap();
    let state = FluidState {
        rho: setup.density(b4),
        v: mv.v,
        s: setup.s,
        omega: setup.omega,
    };
    let closed = reference_tensor(&state, mv.f, tm.mu, tm.w, setup.f_ref, &setup.eos).unwrap();
    let fd = setup.reference_tensor_fd(b4, 1e-5);
    assert!((closed.0 - fd).norm_inf() < 1e-6 * closed.0.norm_inf().max(1.0));
    // lambda = t: time-space row reduces to -f v*F, space block to f m 1
    let m = state.m(&setup.eos).unwrap();
    let row = closed.0.time_space();
    let want = -(mv.f.pre_mul(mv.v)) * setup.f_ref;
    assert!((row - want).norm_inf() < 1e-12);
    let ss = closed.0.space_space();
    assert!((ss - Mat3::IDENTITY * (m * setup.f_ref)).norm_inf() < 1e-12);
}

#[test]
fn reference_density_is_conserved_across_solved_shocks() {
    use rhkit_core::kinematics::SurfaceFrame;
    use rhkit_core::shock::{solve_downstream, Strength};

    let eos = Eos::ideal_gas(1.4, 1.0, 1.0).unwrap();
    let c1 = eos.evaluate(1.0, 0.0).unwrap().sound_speed();
    let up = FluidState::new(1.0, Vec3::new(2.0 * c1, 0.4, 0.0), 0.0);
    let frame = SurfaceFrame::new(Vec3::new(1.0, 0.0, 0.0), 0.0).unwrap();
    for mach in [1.2, 2.0, 4.0, 8.0] {
        let pair = solve_downstream(&up, &eos, &frame, Strength::Mach(mach)).unwrap();
        let f1 = pair.up.rho * pair.f_up.det();
        let f2 = pair.down.rho * pair.f_down.det();
        assert!((f1 - pair.f_ref).abs() < 1e-12);
        assert!(
            (f2 - pair.f_ref).abs() < 1e-12,
            "mach {mach}: [f] = {:e}",
            f2 - f1
        );
    }
}
