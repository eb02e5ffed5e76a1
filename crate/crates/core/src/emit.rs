//! Bit-exact file emitters: complex fields as CSV, images as binary
//! PPM (P6) / PGM (P5), hotel reports and sweep results as JSON.
//!
//! Identical configurations produce byte-identical outputs; the one
//! exception is the report timestamp, isolated to a single JSON key.

use crate::config::RunConfig;
use crate::field::ComplexField;
use crate::render::{GrayImage, RgbImage};
use crate::vortex::{HotelState, SweepOutcome, Vortex};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

/// Provenance block attached to every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// SHA-256 of the canonical configuration rendering.
    pub config_hash: String,
    pub tool_version: String,
    /// Seconds since the Unix epoch; the only nondeterministic output field.
    pub timestamp_unix: u64,
}

impl Provenance {
    pub fn new(config: &RunConfig, timestamp_unix: u64) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(config.canonical_string().as_bytes());
        Provenance {
            config_hash: format!("{:x}", hasher.finalize()),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix,
        }
    }

    pub fn now(config: &RunConfig) -> Self {
        let ts = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self::new(config, ts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportPoint {
    pub x: f64,
    pub y: f64,
}

impl From<&Vortex> for ReportPoint {
    fn from(v: &Vortex) -> Self {
        ReportPoint { x: v.x, y: v.y }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportPair {
    pub room: ReportPoint,
    pub guest: Option<ReportPoint>,
    pub separation: Option<f64>,
    pub annihilated: bool,
}

/// Serializable form of a [`HotelState`] with provenance. Key order is
/// fixed by field order here and round-trips losslessly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HotelReport {
    pub mu: f64,
    pub regime: String,
    pub correspondence: String,
    pub central_charge: i64,
    pub pairs: Vec<ReportPair>,
    pub provenance: Provenance,
}

impl HotelReport {
    pub fn new(state: &HotelState, provenance: Provenance) -> Self {
        HotelReport {
            mu: state.mu,
            regime: state.regime.name().to_string(),
            correspondence: state.correspondence.name().to_string(),
            central_charge: state.central_charge,
            pairs: state
                .pairs
                .iter()
                .map(|p| ReportPair {
                    room: (&p.room).into(),
                    guest: p.guest.as_ref().map(Into::into),
                    separation: p.separation,
                    annihilated: p.annihilated,
                })
                .collect(),
            provenance,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::invalid("report", format!("malformed report JSON: {e}")))
    }
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    Ok(std::io::BufWriter::new(
        std::fs::File::create(path).map_err(|e| Error::io(path, e))?,
    ))
}

/// Complex field as CSV: header `x,y,re,im`, row-major (y outer, x inner),
/// decimal text with 17 significant digits.
pub fn write_field_csv(field: &ComplexField, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let g = field.grid();
    let io = |e| Error::io(path, e);
    writeln!(w, "x,y,re,im").map_err(io)?;
    for iy in 0..g.ny() {
        let y = g.y_at(iy);
        for ix in 0..g.nx() {
            let v = field.at(ix, iy);
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                g.x_at(ix),
                y,
                v.re,
                v.im
            )
            .map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

/// Binary PPM (P6), maxval 255.
pub fn write_ppm(image: &RgbImage, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    write!(w, "P6\n{} {}\n255\n", image.width, image.height).map_err(io)?;
    w.write_all(&image.data).map_err(io)?;
    w.flush().map_err(io)
}

/// Binary PGM (P5), maxval 255.
pub fn write_pgm(image: &GrayImage, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    write!(w, "P5\n{} {}\n255\n", image.width, image.height).map_err(io)?;
    w.write_all(&image.data).map_err(io)?;
    w.flush().map_err(io)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::invalid("json", e.to_string()))?;
    w.write_all(text.as_bytes()).map_err(io)?;
    w.write_all(b"\n").map_err(io)?;
    w.flush().map_err(io)
}

/// Serializable sweep result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub states: Vec<HotelReport>,
    pub trajectories: Vec<crate::vortex::Trajectory>,
}

impl SweepReport {
    pub fn new(outcome: &SweepOutcome, provenance: Provenance) -> Self {
        SweepReport {
            states: outcome
                .states
                .iter()
                .map(|s| HotelReport::new(s, provenance.clone()))
                .collect(),
            trajectories: outcome.trajectories.clone(),
        }
    }
}
