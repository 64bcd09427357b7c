//! `tensor check`: residual tables for manufactured or user-specified fields.

use std::path::PathBuf;

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rhkit_core::fields::{
    AnalyticField, DensitySine, EntropyWave, SimpleWave, SmoothField, UniformField,
};
use rhkit_core::linalg::{Vec3, Vec4};
use rhkit_core::tensors::{divergence_residual, motion_residuals, FdScheme, FluidState};

use crate::cmd_shock::{load_eos, load_json};
use crate::output::{csv_row, print_json, CliError};
use crate::settings::{OutputFormat, Settings};
use crate::EosArg;

#[derive(Args)]
pub struct CheckArgs {
    /// Built-in manufactured field: uniform, density-sine, simple-wave,
    /// entropy-wave.
    #[arg(long, conflicts_with = "field_spec")]
    field: Option<String>,
    /// JSON field specification (trig/polynomial coefficients per component).
    #[arg(long)]
    field_spec: Option<PathBuf>,
    #[command(flatten)]
    eos: EosArg,
    /// Evaluation points "t,x1,x2,x3", repeatable.
    #[arg(long = "point")]
    points: Vec<String>,
    /// Additionally sample this many random points in [-0.5, 0.5]^4.
    #[arg(long, default_value_t = 0)]
    random_points: usize,
    /// Seed for the random points (falls back to the config's seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-4)]
    step: f64,
    /// Use the fourth-order five-point scheme.
    #[arg(long, default_value_t = false)]
    fourth_order: bool,
}

fn built_in(name: &str, eos: &rhkit_core::eos::Eos) -> Result<Box<dyn SmoothField>, CliError> {
    match name {
        "uniform" => Ok(Box::new(UniformField(FluidState::new(
            1.0,
            Vec3::ZERO,
            0.0,
        )))),
        "density-sine" => Ok(Box::new(DensitySine {
            amplitude: 0.1,
            wavenumber: 1.0,
        })),
        "simple-wave" => Ok(Box::new(SimpleWave::new(eos, 1.0, 0.0, 0.05, 1.0))),
        "entropy-wave" => Ok(Box::new(EntropyWave::new(eos, 0.7, 1.0, 0.1, 1.3))),
        other => Err(CliError::usage(format!(
            "unknown field \"{other}\"; built-ins: uniform, density-sine, simple-wave, entropy-wave"
        ))),
    }
}

fn parse_point(text: &str) -> Result<(f64, Vec3), CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::usage(format!("invalid point \"{text}\": {e}")))?;
    if parts.len() != 4 {
        return Err(CliError::usage(format!(
            "point must be t,x1,x2,x3; got \"{text}\""
        )));
    }
    Ok((parts[0], Vec3::new(parts[1], parts[2], parts[3])))
}

#[derive(Serialize)]
struct Row {
    t: f64,
    x1: f64,
    x2: f64,
    x3: f64,
    energy: f64,
    momentum_1: f64,
    momentum_2: f64,
    momentum_3: f64,
    thermo_1: f64,
    thermo_2: f64,
    thermo_3: f64,
    entropy: f64,
    divt_0: f64,
    divt_1: f64,
    divt_2: f64,
    divt_3: f64,
    equivalence_defect: f64,
}

pub fn check(args: &CheckArgs, settings: &Settings) -> Result<bool, CliError> {
    let eos = match (&args.eos.eos, &settings.eos_path) {
        (None, None) => rhkit_core::eos::Eos::ideal_gas(1.4, 1.0, 1.0).expect("default eos"),
        _ => load_eos(&args.eos, settings)?,
    };
    let field: Box<dyn SmoothField> = match (&args.field, &args.field_spec) {
        (Some(name), None) => built_in(name, &eos)?,
        (None, Some(path)) => Box::new(load_json::<AnalyticField>(path, "field spec")?),
        (None, None) => return Err(CliError::usage("pass --field or --field-spec")),
        (Some(_), Some(_)) => unreachable!("clap conflicts"),
    };
    if !(args.step > 0.0) {
        return Err(CliError::usage("step must be positive"));
    }
    let fd = FdScheme {
        step: args.step,
        fourth_order: args.fourth_order,
    };

    let mut points = Vec::new();
    for text in &args.points {
        points.push(parse_point(text)?);
    }
    if points.is_empty() && args.random_points == 0 {
        // default sweep along x1 at t = 0.2
        for i in 0..5 {
            points.push((0.2, Vec3::new(-0.4 + 0.2 * i as f64, 0.0, 0.0)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed.unwrap_or(settings.seed));
    for _ in 0..args.random_points {
        points.push((
            rng.random_range(-0.5..0.5),
            Vec3::new(
                rng.random_range(-0.5..0.5),
                rng.random_range(-0.5..0.5),
                rng.random_range(-0.5..0.5),
            ),
        ));
    }

    let tolerance = settings.tolerance("table_equivalence");
    let mut rows = Vec::with_capacity(points.len());
    let mut worst = 0.0f64;
    for (t, x) in points {
        let r = motion_residuals(field.as_ref(), &eos, t, x, fd)?;
        let div = divergence_residual(field.as_ref(), &eos, t, x, fd)?;
        let expect = Vec4::from_time_space(r.energy, -r.momentum);
        let defect = (div - expect).norm_inf();
        worst = worst.max(defect);
        rows.push(Row {
            t,
            x1: x[0],
            x2: x[1],
            x3: x[2],
            energy: r.energy,
            momentum_1: r.momentum[0],
            momentum_2: r.momentum[1],
            momentum_3: r.momentum[2],
            thermo_1: r.thermo[0],
            thermo_2: r.thermo[1],
            thermo_3: r.thermo[2],
            entropy: r.entropy,
            divt_0: div[0],
            divt_1: div[1],
            divt_2: div[2],
            divt_3: div[3],
            equivalence_defect: defect,
        });
    }

    match settings.output_format {
        OutputFormat::Csv => {
            println!(
                "t,x1,x2,x3,energy,momentum_1,momentum_2,momentum_3,thermo_1,thermo_2,thermo_3,entropy,divt_0,divt_1,divt_2,divt_3,equivalence_defect"
            );
            for r in &rows {
                println!(
                    "{}",
                    csv_row(&[
                        r.t,
                        r.x1,
                        r.x2,
                        r.x3,
                        r.energy,
                        r.momentum_1,
                        r.momentum_2,
                        r.momentum_3,
                        r.thermo_1,
                        r.thermo_2,
                        r.thermo_3,
                        r.entropy,
                        r.divt_0,
                        r.divt_1,
                        r.divt_2,
                        r.divt_3,
                        r.equivalence_defect,
                    ])
                );
            }
        }
        OutputFormat::Json => print_json(&rows),
    }
    eprintln!("rhkit: max table-equivalence defect {worst:.3e} (tolerance {tolerance:.3e})");
    Ok(worst < tolerance)
}
