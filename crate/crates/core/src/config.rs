//! Run configuration: a flat `key = value` file, command-line overrides,
//! and validated defaults.

use crate::field::{
    FractionalCharge, GridSpec, OpticalConfig, ReferenceWaveParams, TruncationConfig,
};
use crate::vortex::DetectionParams;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Charge sweep specification: `from`, inclusive `to`, strictly positive
/// `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl SweepSpec {
    pub fn values(&self) -> Result<Vec<FractionalCharge>> {
        if self.step <= 0.0 || self.step.is_nan() {
            return Err(Error::invalid("step", "sweep step must be positive"));
        }
        if self.to < self.from {
            return Err(Error::invalid("to", "sweep end must not precede its start"));
        }
        let count = ((self.to - self.from) / self.step + 1.5).floor() as usize;
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let mu = self.from + i as f64 * self.step;
            if mu > self.to + 1e-12 {
                break;
            }
            out.push(FractionalCharge::new(mu)?);
        }
        Ok(out)
    }
}

/// Raw, partially-specified configuration: every field optional, collected
/// from a config file and/or command-line flags before validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub mu: Option<f64>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub step: Option<f64>,
    pub lambda: Option<f64>,
    pub z: Option<f64>,
    pub half_width: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub n_max: Option<usize>,
    pub tail_tol: Option<f64>,
    pub amp_floor: Option<f64>,
    pub gate: Option<f64>,
    pub trust_frac: Option<f64>,
    pub ref_amplitude: Option<f64>,
    pub ref_tilt: Option<f64>,
    pub ref_width: Option<f64>,
    pub ref_shift: Option<f64>,
    pub aperture_radius: Option<f64>,
    pub aperture_samples: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub emit_csv: Option<bool>,
    pub emit_images: Option<bool>,
    pub emit_report: Option<bool>,
}

fn parse_value<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::invalid(key, format!("cannot parse value `{}`", raw.trim())))
}

fn parse_bool(key: &str, raw: &str) -> Result<bool> {
    match raw.trim() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(Error::invalid(key, format!("cannot parse boolean `{other}`"))),
    }
}

impl PartialConfig {
    /// Parse a flat `key = value` file; `#` starts a comment. Keys mirror
    /// the long command-line flag names.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_str_content(&text)
    }

    pub fn from_str_content(text: &str) -> Result<Self> {
        let mut cfg = PartialConfig::default();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::invalid(
                    "config",
                    format!("line {}: expected `key = value`, got `{line}`", lineno + 1),
                )
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "mu" => cfg.mu = Some(parse_value(key, value)?),
                "from" => cfg.from = Some(parse_value(key, value)?),
                "to" => cfg.to = Some(parse_value(key, value)?),
                "step" => cfg.step = Some(parse_value(key, value)?),
                "lambda" => cfg.lambda = Some(parse_value(key, value)?),
                "z" => cfg.z = Some(parse_value(key, value)?),
                "half-width" => cfg.half_width = Some(parse_value(key, value)?),
                "nx" => cfg.nx = Some(parse_value(key, value)?),
                "ny" => cfg.ny = Some(parse_value(key, value)?),
                "n-max" => cfg.n_max = Some(parse_value(key, value)?),
                "tail-tol" => cfg.tail_tol = Some(parse_value(key, value)?),
                "amp-floor" => cfg.amp_floor = Some(parse_value(key, value)?),
                "gate" => cfg.gate = Some(parse_value(key, value)?),
                "trust-frac" => cfg.trust_frac = Some(parse_value(key, value)?),
                "ref-amplitude" => cfg.ref_amplitude = Some(parse_value(key, value)?),
                "ref-tilt" => cfg.ref_tilt = Some(parse_value(key, value)?),
                "ref-width" => cfg.ref_width = Some(parse_value(key, value)?),
                "ref-shift" => cfg.ref_shift = Some(parse_value(key, value)?),
                "aperture-radius" => cfg.aperture_radius = Some(parse_value(key, value)?),
                "aperture-samples" => cfg.aperture_samples = Some(parse_value(key, value)?),
                "out-dir" => cfg.out_dir = Some(PathBuf::from(value)),
                "emit-csv" => cfg.emit_csv = Some(parse_bool(key, value)?),
                "emit-images" => cfg.emit_images = Some(parse_bool(key, value)?),
                "emit-report" => cfg.emit_report = Some(parse_bool(key, value)?),
                other => {
                    return Err(Error::invalid(
                        "config",
                        format!("line {}: unknown key `{other}`", lineno + 1),
                    ))
                }
            }
        }
        Ok(cfg)
    }

    /// Overlay: any field set in `over` wins.
    pub fn merged_under(mut self, over: &PartialConfig) -> PartialConfig {
        macro_rules! take {
            ($f:ident) => {
                if over.$f.is_some() {
                    self.$f = over.$f.clone();
                }
            };
        }
        take!(mu);
        take!(from);
        take!(to);
        take!(step);
        take!(lambda);
        take!(z);
        take!(half_width);
        take!(nx);
        take!(ny);
        take!(n_max);
        take!(tail_tol);
        take!(amp_floor);
        take!(gate);
        take!(trust_frac);
        take!(ref_amplitude);
        take!(ref_tilt);
        take!(ref_width);
        take!(ref_shift);
        take!(aperture_radius);
        take!(aperture_samples);
        take!(out_dir);
        take!(emit_csv);
        take!(emit_images);
        take!(emit_report);
        self
    }
}

/// A fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mu: FractionalCharge,
    pub sweep: Option<SweepSpec>,
    pub optics: OpticalConfig,
    pub grid: GridSpec,
    /// Explicit series bound; `None` resolves the adaptive floor at run time.
    pub trunc: Option<TruncationConfig>,
    pub tail_tol: f64,
    pub reference: ReferenceWaveParams,
    pub detection: DetectionParams,
    pub aperture_radius: f64,
    pub aperture_samples: usize,
    pub out_dir: PathBuf,
    pub emit_csv: bool,
    pub emit_images: bool,
    pub emit_report: bool,
}

impl RunConfig {
    pub const DEFAULT_MU: f64 = 1.5;
    pub const DEFAULT_HALF_WIDTH: f64 = 1e-3;
    pub const DEFAULT_SAMPLES: usize = 512;
    pub const DEFAULT_APERTURE_RADIUS: f64 = 4e-3;

    /// Validate a partial configuration, filling defaults for anything
    /// unset. Every rejected value names the offending field.
    pub fn from_partial(p: &PartialConfig) -> Result<RunConfig> {
        let optics = OpticalConfig::new(
            p.lambda.unwrap_or(OpticalConfig::DEFAULT_WAVELENGTH),
            p.z.unwrap_or(OpticalConfig::DEFAULT_DISTANCE),
        )?;
        let nx = p.nx.unwrap_or(Self::DEFAULT_SAMPLES);
        let grid = GridSpec::new(
            p.half_width.unwrap_or(Self::DEFAULT_HALF_WIDTH),
            nx,
            p.ny.unwrap_or(nx),
        )?;
        let mu = FractionalCharge::new(p.mu.unwrap_or(Self::DEFAULT_MU))?;
        let sweep = match (p.from, p.to, p.step) {
            (None, None, None) => None,
            (Some(from), Some(to), step) => Some(SweepSpec {
                from,
                to,
                step: step.unwrap_or(0.01),
            }),
            _ => {
                return Err(Error::invalid(
                    "from",
                    "sweep needs both `from` and `to` (and optionally `step`)",
                ))
            }
        };
        if let Some(s) = &sweep {
            s.values()?; // validate monotonicity and step now
        }
        let tail_tol = p.tail_tol.unwrap_or(TruncationConfig::DEFAULT_TAIL_TOL);
        let trunc = p.n_max.map(|n| TruncationConfig::new(n, tail_tol)).transpose()?;
        if tail_tol <= 0.0 || tail_tol.is_nan() {
            return Err(Error::invalid("tail-tol", "tail tolerance must be positive"));
        }
        let reference = ReferenceWaveParams::new(
            p.ref_amplitude.unwrap_or(ReferenceWaveParams::DEFAULT_AMPLITUDE),
            p.ref_tilt.unwrap_or_else(|| ReferenceWaveParams::default_tilt(&grid)),
            p.ref_width.unwrap_or(ReferenceWaveParams::DEFAULT_WIDTH),
            p.ref_shift.unwrap_or(0.0),
        )?;
        let defaults = DetectionParams::defaults_for(&grid);
        let detection = DetectionParams {
            amplitude_floor_frac: p.amp_floor.unwrap_or(defaults.amplitude_floor_frac),
            pairing_gate: p.gate.unwrap_or(defaults.pairing_gate),
            trust_radius: trust_frac_check(p.trust_frac)? * grid.half_width(),
        };
        let aperture_radius = p.aperture_radius.unwrap_or(Self::DEFAULT_APERTURE_RADIUS);
        if aperture_radius <= 0.0 || aperture_radius.is_nan() {
            return Err(Error::invalid("aperture-radius", "must be positive"));
        }
        let aperture_samples = p.aperture_samples.unwrap_or(1024);
        if aperture_samples < 64 {
            return Err(Error::invalid("aperture-samples", "needs at least 64 samples"));
        }
        if detection.amplitude_floor_frac < 0.0 || detection.amplitude_floor_frac.is_nan() {
            return Err(Error::invalid("amp-floor", "must be nonnegative"));
        }
        if detection.pairing_gate <= 0.0 || detection.pairing_gate.is_nan() {
            return Err(Error::invalid("gate", "must be positive"));
        }
        Ok(RunConfig {
            mu,
            sweep,
            optics,
            grid,
            trunc,
            tail_tol,
            reference,
            detection,
            aperture_radius,
            aperture_samples,
            out_dir: p.out_dir.clone().unwrap_or_else(|| PathBuf::from("out")),
            emit_csv: p.emit_csv.unwrap_or(true),
            emit_images: p.emit_images.unwrap_or(true),
            emit_report: p.emit_report.unwrap_or(true),
        })
    }

    /// Canonical one-line-per-key rendering; hashed into report provenance.
    pub fn canonical_string(&self) -> String {
        let mut s = String::new();
        let mut kv: BTreeMap<&str, String> = BTreeMap::new();
        kv.insert("mu", format!("{:.17e}", self.mu.value()));
        if let Some(sw) = &self.sweep {
            kv.insert("from", format!("{:.17e}", sw.from));
            kv.insert("to", format!("{:.17e}", sw.to));
            kv.insert("step", format!("{:.17e}", sw.step));
        }
        kv.insert("lambda", format!("{:.17e}", self.optics.wavelength()));
        kv.insert("z", format!("{:.17e}", self.optics.distance()));
        kv.insert("half-width", format!("{:.17e}", self.grid.half_width()));
        kv.insert("nx", self.grid.nx().to_string());
        kv.insert("ny", self.grid.ny().to_string());
        if let Some(t) = &self.trunc {
            kv.insert("n-max", t.n_max().to_string());
        }
        kv.insert("tail-tol", format!("{:.17e}", self.tail_tol));
        kv.insert("amp-floor", format!("{:.17e}", self.detection.amplitude_floor_frac));
        kv.insert("gate", format!("{:.17e}", self.detection.pairing_gate));
        kv.insert("trust-radius", format!("{:.17e}", self.detection.trust_radius));
        kv.insert("ref-amplitude", format!("{:.17e}", self.reference.amplitude));
        kv.insert("ref-tilt", format!("{:.17e}", self.reference.tilt));
        kv.insert("ref-width", format!("{:.17e}", self.reference.width));
        kv.insert("ref-shift", format!("{:.17e}", self.reference.shift));
        kv.insert("aperture-radius", format!("{:.17e}", self.aperture_radius));
        kv.insert("aperture-samples", self.aperture_samples.to_string());
        for (k, v) in kv {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}

fn trust_frac_check(v: Option<f64>) -> Result<f64> {
    let f = v.unwrap_or(DetectionParams::DEFAULT_TRUST_FRAC);
    if f.is_nan() || f <= 0.0 || f > 1.0 {
        return Err(Error::invalid("trust-frac", "must lie in (0, 1]"));
    }
    Ok(f)
}
