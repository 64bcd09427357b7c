//! `kinematics decompose`: split a 4x4 tangent map into blocks and the
//! derived velocity and deformation gradient.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use rhkit_core::kinematics::decompose_tangent_map;
use rhkit_core::linalg::{Mat3, Mat4, Vec3};

use crate::cmd_shock::load_json;
use crate::output::{print_json, CliError};
use crate::settings::Settings;

#[derive(Args)]
pub struct DecomposeArgs {
    /// 4x4 matrix file (JSON array of four rows).
    #[arg(long)]
    matrix: PathBuf,
}

#[derive(Serialize)]
struct DecomposeReport {
    mu: f64,
    w: Vec3,
    r: Vec3,
    b3: Mat3,
    v: Vec3,
    f: Mat3,
    det_f: f64,
}

pub fn decompose(args: &DecomposeArgs, _settings: &Settings) -> Result<bool, CliError> {
    let matrix: Mat4 = load_json(&args.matrix, "tangent map")?;
    let (tm, mv) = decompose_tangent_map(matrix)?;
    print_json(&DecomposeReport {
        mu: tm.mu,
        w: tm.w,
        r: tm.r,
        b3: tm.b3,
        v: mv.v,
        f: mv.f,
        det_f: mv.f.det(),
    });
    Ok(true)
}
