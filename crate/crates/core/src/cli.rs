//! Command-line driver.
//!
//! Subcommands: `simulate` (field + phase render), `interfere`
//! (interferogram + intensity render), `detect` (vortex list), `hotel`
//! (full report), `sweep` (regime sequence + trajectories), and
//! `oracle-check` (mode series vs quadrature oracle residual).
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure
//! (undersampled plaquette, tracking loss, …). Diagnostics go to stderr.

use crate::config::{PartialConfig, RunConfig, SweepSpec};
use crate::emit::{
    write_field_csv, write_json, write_pgm, write_ppm, HotelReport, Provenance, SweepReport,
};
use crate::field::{
    fractional_field_grid, interferogram, oracle_propagate_with, resolve_truncation,
    ComplexField, TruncationConfig,
};
use crate::render::{render_intensity, render_phase_with_floor};
use crate::vortex::{detect_vortices, hotel_state, sweep_track, Vortex};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "fvhotel",
    version,
    about = "Fractional-vortex Hilbert hotel: propagate, interfere, detect, classify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Flat `key = value` configuration file; flags override its values
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Topological charge of the plate
    #[arg(long)]
    mu: Option<f64>,

    /// Wavelength in meters
    #[arg(long)]
    lambda: Option<f64>,

    /// Propagation distance in meters
    #[arg(long)]
    z: Option<f64>,

    /// Grid half-width in meters (window spans ±half-width)
    #[arg(long)]
    half_width: Option<f64>,

    /// Samples along x
    #[arg(long)]
    nx: Option<usize>,

    /// Samples along y (defaults to nx)
    #[arg(long)]
    ny: Option<usize>,

    /// Series bound: sum runs n = -n_max..=n_max (default: adaptive)
    #[arg(long)]
    n_max: Option<usize>,

    /// Relative tail tolerance for the adaptive series bound
    #[arg(long)]
    tail_tol: Option<f64>,

    /// Amplitude floor as a fraction of the peak modulus
    #[arg(long)]
    amp_floor: Option<f64>,

    /// Pairing gate in meters (default: 10 pixel pitches)
    #[arg(long)]
    gate: Option<f64>,

    /// Trusted-detection radius as a fraction of the half-width
    #[arg(long)]
    trust_frac: Option<f64>,

    /// Reference-wave amplitude
    #[arg(long)]
    ref_amplitude: Option<f64>,

    /// Reference tilt q in radians per meter (default: 2π/(10·pitch))
    #[arg(long)]
    ref_tilt: Option<f64>,

    /// Reference beam radius w in meters
    #[arg(long)]
    ref_width: Option<f64>,

    /// Reference envelope shift β in meters
    #[arg(long)]
    ref_shift: Option<f64>,

    /// Oracle aperture radius in meters
    #[arg(long)]
    aperture_radius: Option<f64>,

    /// Oracle raster samples per axis
    #[arg(long)]
    aperture_samples: Option<usize>,

    /// Output directory
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    /// Write the field CSV
    #[arg(long)]
    emit_csv: Option<bool>,

    /// Write PPM/PGM renders
    #[arg(long)]
    emit_images: Option<bool>,

    /// Write the JSON report
    #[arg(long)]
    emit_report: Option<bool>,
}

#[derive(Args, Debug, Default)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// First charge value
    #[arg(long)]
    from: Option<f64>,

    /// Last charge value (inclusive)
    #[arg(long)]
    to: Option<f64>,

    /// Charge increment
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct OracleArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Maximum allowed relative L2 residual over the central quarter-window
    #[arg(long, default_value_t = 5e-2)]
    tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Propagate the fractional field and render its phase
    Simulate(CommonArgs),
    /// Synthesize the interferogram with the tilted reference wave
    Interfere(CommonArgs),
    /// Detect and list phase singularities
    Detect(CommonArgs),
    /// Produce the full hotel report (detect, pair, classify)
    Hotel(CommonArgs),
    /// Sweep the charge and track regimes and vortex trajectories
    Sweep(SweepArgs),
    /// Compare the mode series against the Fresnel-quadrature oracle
    OracleCheck(OracleArgs),
}

impl CommonArgs {
    fn to_partial(&self) -> PartialConfig {
        PartialConfig {
            mu: self.mu,
            from: None,
            to: None,
            step: None,
            lambda: self.lambda,
            z: self.z,
            half_width: self.half_width,
            nx: self.nx,
            ny: self.ny,
            n_max: self.n_max,
            tail_tol: self.tail_tol,
            amp_floor: self.amp_floor,
            gate: self.gate,
            trust_frac: self.trust_frac,
            ref_amplitude: self.ref_amplitude,
            ref_tilt: self.ref_tilt,
            ref_width: self.ref_width,
            ref_shift: self.ref_shift,
            aperture_radius: self.aperture_radius,
            aperture_samples: self.aperture_samples,
            out_dir: self.out_dir.clone(),
            emit_csv: self.emit_csv,
            emit_images: self.emit_images,
            emit_report: self.emit_report,
        }
    }

    fn resolve(&self, sweep: Option<&SweepArgs>) -> Result<RunConfig> {
        let mut partial = match &self.config {
            Some(path) => PartialConfig::from_file(path)?,
            None => PartialConfig::default(),
        };
        partial = partial.merged_under(&self.to_partial());
        if let Some(s) = sweep {
            if s.from.is_some() {
                partial.from = s.from;
            }
            if s.to.is_some() {
                partial.to = s.to;
            }
            if s.step.is_some() {
                partial.step = s.step;
            }
        }
        RunConfig::from_partial(&partial)
    }
}

/// Field with the configured (explicit or resolved-adaptive) truncation.
fn compute_field(cfg: &RunConfig) -> Result<(ComplexField, TruncationConfig)> {
    let trunc = match cfg.trunc {
        Some(t) => t,
        None => resolve_truncation(cfg.mu, &cfg.grid, &cfg.optics, cfg.tail_tol)?,
    };
    Ok((
        fractional_field_grid(cfg.mu, &cfg.grid, &cfg.optics, &trunc),
        trunc,
    ))
}

fn print_vortices(vortices: &[Vortex]) {
    for v in vortices {
        println!(
            "  charge {:+} at x = {:+.4e} m, y = {:+.4e} m (rho = {:.4e} m)",
            v.charge,
            v.x,
            v.y,
            v.radius()
        );
    }
}

fn cmd_simulate(cfg: &RunConfig) -> Result<()> {
    let (field, trunc) = compute_field(cfg)?;
    println!(
        "simulated mu = {} on {}x{} window ±{:.3e} m (n_max = {})",
        cfg.mu,
        cfg.grid.nx(),
        cfg.grid.ny(),
        cfg.grid.half_width(),
        trunc.n_max()
    );
    if cfg.emit_csv {
        let p = cfg.out_dir.join("field.csv");
        write_field_csv(&field, &p)?;
        println!("wrote {}", p.display());
    }
    if cfg.emit_images {
        let floor = cfg.detection.amplitude_floor_frac * field.max_modulus();
        let p = cfg.out_dir.join("phase.ppm");
        write_ppm(&render_phase_with_floor(&field, floor), &p)?;
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_interfere(cfg: &RunConfig) -> Result<()> {
    let (field, _) = compute_field(cfg)?;
    let intensity = interferogram(&field, &cfg.reference);
    if cfg.emit_csv {
        let p = cfg.out_dir.join("field.csv");
        write_field_csv(&field, &p)?;
        println!("wrote {}", p.display());
    }
    if cfg.emit_images {
        let p = cfg.out_dir.join("intensity.pgm");
        write_pgm(&render_intensity(&intensity), &p)?;
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_detect(cfg: &RunConfig) -> Result<()> {
    let (field, _) = compute_field(cfg)?;
    let floor = cfg.detection.amplitude_floor_frac * field.max_modulus();
    let vortices = detect_vortices(&field, floor)?;
    println!("{} singularities at mu = {}:", vortices.len(), cfg.mu);
    print_vortices(&vortices);
    if cfg.emit_report {
        let p = cfg.out_dir.join("vortices.json");
        write_json(&vortices, &p)?;
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_hotel(cfg: &RunConfig) -> Result<()> {
    let (field, _) = compute_field(cfg)?;
    let state = hotel_state(&field, cfg.mu, &cfg.detection)?;
    let report = HotelReport::new(&state, Provenance::now(cfg));
    println!(
        "mu = {}: regime {} correspondence {} central {:+} pairs {} ({} annihilated)",
        cfg.mu,
        report.regime,
        report.correspondence,
        report.central_charge,
        report.pairs.len(),
        state.annihilated_pairs(),
    );
    if cfg.emit_csv {
        write_field_csv(&field, &cfg.out_dir.join("field.csv"))?;
    }
    if cfg.emit_images {
        let floor = cfg.detection.amplitude_floor_frac * field.max_modulus();
        write_ppm(
            &render_phase_with_floor(&field, floor),
            &cfg.out_dir.join("phase.ppm"),
        )?;
        let intensity = interferogram(&field, &cfg.reference);
        write_pgm(&render_intensity(&intensity), &cfg.out_dir.join("intensity.pgm"))?;
    }
    if cfg.emit_report {
        let p = cfg.out_dir.join("report.json");
        write_json(&report, &p)?;
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig) -> Result<()> {
    let spec: SweepSpec = cfg.sweep.ok_or_else(|| {
        Error::invalid("from", "sweep requires --from and --to (and optionally --step)")
    })?;
    let mus = spec.values()?;
    let trunc = match cfg.trunc {
        Some(t) => t,
        None => {
            // the largest charge needs the widest series; resolve once
            let last = *mus.last().expect("validated nonempty");
            resolve_truncation(last, &cfg.grid, &cfg.optics, cfg.tail_tol)?
        }
    };
    let outcome = sweep_track(&mus, &cfg.grid, &cfg.optics, &trunc, &cfg.detection)?;
    for s in &outcome.states {
        println!(
            "mu = {:>6.3}: {:9} {:20} pairs {} ({} annihilated)",
            s.mu,
            s.regime.name(),
            s.correspondence.name(),
            s.pairs.len(),
            s.annihilated_pairs()
        );
    }
    println!("{} trajectories tracked", outcome.trajectories.len());
    if cfg.emit_report {
        let report = SweepReport::new(&outcome, Provenance::now(cfg));
        let p = cfg.out_dir.join("sweep.json");
        write_json(&report, &p)?;
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_oracle_check(cfg: &RunConfig, tol: f64) -> Result<()> {
    let (series, trunc) = compute_field(cfg)?;
    let oracle = oracle_propagate_with(
        cfg.mu,
        &cfg.grid,
        &cfg.optics,
        cfg.aperture_radius,
        cfg.aperture_samples,
        crate::field::DEFAULT_APODIZATION_START,
    );
    // relative L2 over the central quarter-window
    let (nx, ny) = (cfg.grid.nx(), cfg.grid.ny());
    let (qx, qy) = (nx / 4, ny / 4);
    let mut num = 0.0;
    let mut den = 0.0;
    for iy in qy..ny - qy {
        for ix in qx..nx - qx {
            num += (series.at(ix, iy) - oracle.at(ix, iy)).norm_sqr();
            den += oracle.at(ix, iy).norm_sqr();
        }
    }
    let residual = (num / den).sqrt();
    println!(
        "oracle residual at mu = {}: rel L2 = {residual:.3e} over central quarter (n_max = {}, raster {}², tol {tol:.1e})",
        cfg.mu,
        trunc.n_max(),
        cfg.aperture_samples
    );
    if residual <= tol {
        println!("PASS");
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "series/oracle residual {residual:.3e} exceeds tolerance {tol:.1e}"
        )))
    }
}

/// Parse arguments and run. Returns the process exit code.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are successes; real parse errors are
            // configuration errors
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => a.resolve(None).and_then(|c| cmd_simulate(&c)),
        Command::Interfere(a) => a.resolve(None).and_then(|c| cmd_interfere(&c)),
        Command::Detect(a) => a.resolve(None).and_then(|c| cmd_detect(&c)),
        Command::Hotel(a) => a.resolve(None).and_then(|c| cmd_hotel(&c)),
        Command::Sweep(a) => a.common.resolve(Some(a)).and_then(|c| cmd_sweep(&c)),
        Command::OracleCheck(a) => a
            .common
            .resolve(None)
            .and_then(|c| cmd_oracle_check(&c, a.tol)),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_cli(["fvhotel", "--help"]), 0);
    }

    #[test]
    fn bad_flag_value_exits_one() {
        assert_eq!(run_cli(["fvhotel", "hotel", "--mu", "abc"]), 1);
    }

    #[test]
    fn missing_subcommand_exits_one() {
        assert_eq!(run_cli(["fvhotel"]), 1);
    }
}
