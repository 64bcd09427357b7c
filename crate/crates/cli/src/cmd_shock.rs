//! `shock solve`, `shock check`, `shock hugoniot`, `shock gap-demo`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;

use rhkit_core::eos::Eos;
use rhkit_core::kinematics::SurfaceFrame;
use rhkit_core::linalg::Vec3;
use rhkit_core::shock::{
    construct_crh2_pair, hugoniot_locus, lax_admissible, reference_surface_term_scaled,
    rh_residuals, solve_downstream, spacetime_surface_term_scaled, LaxReport, RhResiduals,
    ShockPair, Strength,
};
use rhkit_core::tensors::FluidState;

use crate::output::{csv_row, print_json, CliError};
use crate::settings::{OutputFormat, Settings};
use crate::EosArg;

pub fn load_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("invalid {what} {}: {e}", path.display())))
}

pub fn load_eos(arg: &EosArg, settings: &Settings) -> Result<Eos, CliError> {
    let path = arg
        .eos
        .clone()
        .or_else(|| settings.eos_path.clone())
        .ok_or_else(|| CliError::usage("no EOS given: pass --eos or set eos_path in the config"))?;
    let eos: Eos = load_json(&path, "EOS file")?;
    eos.validate()?;
    Ok(eos)
}

pub fn parse_normal(text: &str) -> Result<Vec3, CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::usage(format!("invalid normal \"{text}\": {e}")))?;
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "normal must have three components, got \"{text}\""
        )));
    }
    Ok(Vec3::new(parts[0], parts[1], parts[2]))
}

#[derive(Args)]
pub struct SolveArgs {
    /// Upstream state file (JSON: rho, v, s, omega).
    #[arg(long)]
    upstream: PathBuf,
    #[command(flatten)]
    eos: EosArg,
    /// Upstream normal Mach number (> 1).
    #[arg(long, conflicts_with_all = ["down_pressure", "down_density"])]
    mach: Option<f64>,
    /// Downstream pressure (>= upstream pressure).
    #[arg(long, conflicts_with = "down_density")]
    down_pressure: Option<f64>,
    /// Downstream density (>= upstream density).
    #[arg(long)]
    down_density: Option<f64>,
    /// Surface normal, comma-separated (normalized internally).
    #[arg(long, default_value = "1,0,0")]
    normal: String,
    /// Proposed surface speed; the solver realizes the speed consistent with
    /// the strength and reports it.
    #[arg(long, default_value_t = 0.0)]
    dn: f64,
}

#[derive(Serialize)]
struct Summary {
    rho1: f64,
    rho2: f64,
    p1: f64,
    p2: f64,
    s1: f64,
    s2: f64,
    u1: f64,
    u2: f64,
    mach1: f64,
    mach2: f64,
    dn: f64,
}

#[derive(Serialize)]
struct SurfaceTerms {
    spacetime_scaled: [f64; 4],
    reference_scaled: [f64; 3],
    spacetime_norm: f64,
    reference_norm: f64,
}

#[derive(Serialize)]
struct Check {
    residual_tolerance: f64,
    surface_tolerance: f64,
    tolerance_scale: f64,
    passed: bool,
}

#[derive(Serialize)]
struct SolveReport {
    summary: Summary,
    pair: ShockPair,
    residuals: RhResiduals,
    surface_terms: SurfaceTerms,
    lax: LaxReport,
    check: Check,
}

fn build_report(pair: &ShockPair, eos: &Eos, settings: &Settings) -> Result<SolveReport, CliError> {
    let t1 = eos.evaluate(pair.up.rho, pair.up.s)?;
    let t2 = eos.evaluate(pair.down.rho, pair.down.s)?;
    let residuals = rh_residuals(pair, eos)?;
    let spacetime = spacetime_surface_term_scaled(pair, eos)?;
    let reference = reference_surface_term_scaled(pair, eos)?;
    let lax = lax_admissible(pair, eos)?;
    let residual_tolerance = settings.tolerance("shock_residual");
    let surface_tolerance = settings.tolerance("surface_term");
    let passed = residuals.norm_inf() < residual_tolerance
        && spacetime.norm_inf() < surface_tolerance
        && reference.norm_inf() < surface_tolerance;
    Ok(SolveReport {
        summary: Summary {
            rho1: pair.up.rho,
            rho2: pair.down.rho,
            p1: t1.p,
            p2: t2.p,
            s1: pair.up.s,
            s2: pair.down.s,
            u1: pair.u1(),
            u2: pair.u2(),
            mach1: pair.u1() / t1.sound_speed(),
            mach2: pair.u2() / t2.sound_speed(),
            dn: pair.frame.d_n,
        },
        pair: *pair,
        residuals,
        surface_terms: SurfaceTerms {
            spacetime_scaled: spacetime.0,
            reference_scaled: reference.0,
            spacetime_norm: spacetime.norm_inf(),
            reference_norm: reference.norm_inf(),
        },
        lax,
        check: Check {
            residual_tolerance,
            surface_tolerance,
            tolerance_scale: settings.tolerance_scale,
            passed,
        },
    })
}

pub fn solve(args: &SolveArgs, settings: &Settings) -> Result<bool, CliError> {
    let upstream: FluidState = load_json(&args.upstream, "upstream state")?;
    let eos = load_eos(&args.eos, settings)?;
    let frame = SurfaceFrame::new(parse_normal(&args.normal)?, args.dn)?;
    let strength = match (args.mach, args.down_pressure, args.down_density) {
        (Some(m), None, None) => Strength::Mach(m),
        (None, Some(p), None) => Strength::DownPressure(p),
        (None, None, Some(r)) => Strength::DownDensity(r),
        (None, None, None) => {
            return Err(CliError::usage(
                "pass one of --mach, --down-pressure, --down-density",
            ))
        }
        _ => unreachable!("clap conflicts"),
    };
    let pair = solve_downstream(&upstream, &eos, &frame, strength)?;
    let report = build_report(&pair, &eos, settings)?;
    let passed = report.check.passed;
    print_json(&report);
    Ok(passed)
}

#[derive(Args)]
pub struct CheckArgs {
    /// Pair file (JSON ShockPair, as emitted by `shock solve` under "pair").
    #[arg(long)]
    pair: PathBuf,
    #[command(flatten)]
    eos: EosArg,
}

#[derive(Serialize)]
struct CheckReport {
    closure_valid: bool,
    closure_error: Option<String>,
    #[serde(flatten)]
    report: SolveReport,
}

pub fn check(args: &CheckArgs, settings: &Settings) -> Result<bool, CliError> {
    let pair: ShockPair = load_json(&args.pair, "shock pair")?;
    let eos = load_eos(&args.eos, settings)?;
    let closure = pair.validate();
    let report = build_report(&pair, &eos, settings)?;
    let passed = report.check.passed && closure.is_ok();
    print_json(&CheckReport {
        closure_valid: closure.is_ok(),
        closure_error: closure.err().map(|e| e.to_string()),
        report,
    });
    Ok(passed)
}

#[derive(Args)]
pub struct HugoniotArgs {
    /// Upstream state file (JSON).
    #[arg(long)]
    upstream: PathBuf,
    #[command(flatten)]
    eos: EosArg,
    /// Density-ratio sweep lo:hi:count, all ratios inside (1, strong-shock limit).
    #[arg(long)]
    ratios: String,
    /// Surface normal.
    #[arg(long, default_value = "1,0,0")]
    normal: String,
}

fn parse_sweep(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "ratios must be lo:hi:count, got \"{text}\""
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|e| CliError::usage(format!("invalid sweep start: {e}")))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|e| CliError::usage(format!("invalid sweep end: {e}")))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|e| CliError::usage(format!("invalid sweep count: {e}")))?;
    if count < 2 || !(hi > lo) {
        return Err(CliError::usage("sweep needs hi > lo and count >= 2"));
    }
    Ok((0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect())
}

pub fn hugoniot(args: &HugoniotArgs, settings: &Settings) -> Result<bool, CliError> {
    let upstream: FluidState = load_json(&args.upstream, "upstream state")?;
    let eos = load_eos(&args.eos, settings)?;
    let frame = SurfaceFrame::new(parse_normal(&args.normal)?, 0.0)?;
    let ratios = parse_sweep(&args.ratios)?;
    let samples = hugoniot_locus(&upstream, &eos, &frame, &ratios)?;

    // every sample must satisfy the jump conditions at its implied speed
    let tolerance = settings.tolerance("shock_residual");
    let mut worst = 0.0f64;
    for s in &samples {
        let realized = SurfaceFrame {
            n: frame.n,
            d_n: s.d_n_implied,
        };
        let u1 = realized.relative_velocity(upstream.v);
        let down = FluidState {
            rho: s.rho2,
            v: upstream.v + realized.n * (s.u2 - u1),
            s: s.s2,
            omega: upstream.omega,
        };
        let pair = ShockPair::from_states(upstream, down, realized)?;
        worst = worst.max(rh_residuals(&pair, &eos)?.norm_inf());
    }

    match settings.output_format {
        OutputFormat::Csv => {
            println!("rho2,p2,u2,s2,Dn");
            for s in &samples {
                println!("{}", csv_row(&[s.rho2, s.p2, s.u2, s.s2, s.d_n_implied]));
            }
        }
        OutputFormat::Json => print_json(&samples),
    }
    eprintln!(
        "rhkit: max jump-condition residual over the locus {worst:.3e} (tolerance {tolerance:.3e})"
    );
    Ok(worst < tolerance)
}

#[derive(Args)]
pub struct GapDemoArgs {
    /// Downstream density of the constructed pair.
    #[arg(long)]
    rho2: f64,
    /// Upstream state file; default rho = 1, p = 1 at rest plus the normal
    /// inflow implied by --u1-mach.
    #[arg(long)]
    upstream: Option<PathBuf>,
    #[command(flatten)]
    eos: EosArg,
    /// Upstream relative speed in sound-speed units (when no upstream file).
    #[arg(long, default_value_t = 2.0)]
    u1_mach: f64,
    /// Surface normal.
    #[arg(long, default_value = "1,0,0")]
    normal: String,
    /// Surface speed (with an upstream file; otherwise derived).
    #[arg(long, default_value_t = 0.0)]
    dn: f64,
}

#[derive(Serialize)]
struct GapDemoReport {
    upstream: FluidState,
    rho2: f64,
    u1: f64,
    reference_term: [f64; 3],
    spacetime_term: [f64; 4],
    reference_term_norm: f64,
    spacetime_term_norm: f64,
    /// `[p + rho u^2]` relative to the upstream pressure.
    momentum_defect: f64,
    pair: ShockPair,
    check: Check,
}

pub fn gap_demo(args: &GapDemoArgs, settings: &Settings) -> Result<bool, CliError> {
    let eos = match (&args.eos.eos, &settings.eos_path) {
        (None, None) => Eos::ideal_gas(1.4, 1.0, 1.0).expect("default eos"),
        _ => load_eos(&args.eos, settings)?,
    };
    let n = parse_normal(&args.normal)?;
    let (upstream, frame) = match &args.upstream {
        Some(path) => {
            let state: FluidState = load_json(path, "upstream state")?;
            (state, SurfaceFrame::new(n, args.dn)?)
        }
        None => {
            let t1 = eos.evaluate(1.0, 0.0)?;
            let frame = SurfaceFrame::new(n, 0.0)?;
            let state = FluidState::new(1.0, frame.n * (args.u1_mach * t1.sound_speed()), 0.0);
            (state, frame)
        }
    };
    let pair = construct_crh2_pair(&upstream, &eos, &frame, args.rho2)?;
    let reference = reference_surface_term_scaled(&pair, &eos)?;
    let spacetime = spacetime_surface_term_scaled(&pair, &eos)?;
    let residuals = rh_residuals(&pair, &eos)?;
    let surface_tolerance = settings.tolerance("surface_term");
    // the reference term must vanish; the space-time term is expected away
    // from zero unless rho2 sits at the true shock density
    let passed = reference.norm_inf() < surface_tolerance;
    let report = GapDemoReport {
        upstream,
        rho2: args.rho2,
        u1: pair.u1(),
        reference_term: reference.0,
        spacetime_term: spacetime.0,
        reference_term_norm: reference.norm_inf(),
        spacetime_term_norm: spacetime.norm_inf(),
        momentum_defect: residuals.momentum_n,
        pair,
        check: Check {
            residual_tolerance: settings.tolerance("shock_residual"),
            surface_tolerance,
            tolerance_scale: settings.tolerance_scale,
            passed,
        },
    };
    print_json(&report);
    Ok(passed)
}
