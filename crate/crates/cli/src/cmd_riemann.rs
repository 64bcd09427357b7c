//! `riemann solve`: star state plus sampled self-similar solution as CSV.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use rhkit_core::riemann::{sample, solve_star};
use rhkit_core::shock::rh_residuals;
use rhkit_core::tensors::FluidState;

use crate::cmd_shock::{load_eos, load_json};
use crate::output::{csv_row, print_json, CliError};
use crate::settings::{OutputFormat, Settings};
use crate::EosArg;

#[derive(Args)]
pub struct SolveArgs {
    /// Left state file (JSON).
    #[arg(long)]
    left: PathBuf,
    /// Right state file (JSON).
    #[arg(long)]
    right: PathBuf,
    #[command(flatten)]
    eos: EosArg,
    /// Number of spatial samples.
    #[arg(long, default_value_t = 400)]
    samples: usize,
    /// Sampling time (> 0).
    #[arg(long, default_value_t = 0.2)]
    t: f64,
    #[arg(long, default_value_t = -0.5)]
    xmin: f64,
    #[arg(long, default_value_t = 0.5)]
    xmax: f64,
}

#[derive(Serialize)]
struct SampleRow {
    x: f64,
    rho: f64,
    u: f64,
    p: f64,
    s: f64,
}

pub fn solve(args: &SolveArgs, settings: &Settings) -> Result<bool, CliError> {
    let left: FluidState = load_json(&args.left, "left state")?;
    let right: FluidState = load_json(&args.right, "right state")?;
    let eos = load_eos(&args.eos, settings)?;
    if !(args.t > 0.0) {
        return Err(CliError::usage("sampling time must be positive"));
    }
    if !(args.xmax > args.xmin) || args.samples < 2 {
        return Err(CliError::usage("need xmax > xmin and samples >= 2"));
    }
    let sol = solve_star(&left, &right, &eos)?;

    // star summary and wave speeds on the diagnostic stream
    eprintln!(
        "rhkit: p* = {:.10}, u* = {:.10}, left {:?} ({:.6}..{:.6}), right {:?} ({:.6}..{:.6})",
        sol.p_star,
        sol.u_star,
        sol.wave_left,
        sol.left_speeds.0,
        sol.left_speeds.1,
        sol.wave_right,
        sol.right_speeds.0,
        sol.right_speeds.1,
    );

    let tolerance = settings.tolerance("shock_residual");
    let mut shocks_ok = true;
    for pair in [&sol.left_shock, &sol.right_shock].into_iter().flatten() {
        let res = rh_residuals(pair, &eos)?;
        shocks_ok &= res.norm_inf() < tolerance;
    }

    let mut rows = Vec::with_capacity(args.samples);
    for i in 0..args.samples {
        let x = args.xmin + (args.xmax - args.xmin) * i as f64 / (args.samples - 1) as f64;
        let state = sample(&sol, &left, &right, &eos, x / args.t)?;
        let p = eos.evaluate(state.rho, state.s)?.p;
        rows.push(SampleRow {
            x,
            rho: state.rho,
            u: state.v[0],
            p,
            s: state.s,
        });
    }

    match settings.output_format {
        OutputFormat::Csv => {
            println!("x,rho,u,p,s");
            for r in &rows {
                println!("{}", csv_row(&[r.x, r.rho, r.u, r.p, r.s]));
            }
        }
        OutputFormat::Json => print_json(&rows),
    }
    Ok(shocks_ok)
}
