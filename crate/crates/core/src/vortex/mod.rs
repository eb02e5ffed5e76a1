//! Phase-singularity detection and Hilbert-hotel bookkeeping.
//!
//! Singularities are located by discrete winding numbers: the sum of
//! principal-value-wrapped phase differences around each 2×2 pixel
//! plaquette, divided by 2π, is exactly −1, 0, or +1 for an adequately
//! sampled field. A positive (counterclockwise) vortex is a *room*, a
//! negative one a *guest*; pairing them along the dislocation line and
//! watching the pairing change across a charge sweep reproduces the
//! hotel bookkeeping.

mod pairing;
mod track;

pub use pairing::{classify_regime, hotel_state, pair_vortices, DetectionParams};
pub use track::{sweep_track, SweepOutcome, TrackPoint, Trajectory};

use crate::field::{ComplexField, GridSpec, ScalarField};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Fraction of the peak modulus below which a pixel's phase is not trusted.
pub const DEFAULT_AMPLITUDE_FLOOR_FRAC: f64 = 1e-3;

/// Default amplitude floor for a field: 1e-3 of its peak modulus.
/// Singularities sit at nulls, so the floor must exclude only the
/// immediate core pixels.
pub fn default_amplitude_floor(field: &ComplexField) -> f64 {
    DEFAULT_AMPLITUDE_FLOOR_FRAC * field.max_modulus()
}

/// A detected phase singularity at a plaquette center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vortex {
    pub x: f64,
    pub y: f64,
    /// Exactly ±1; |w| > 1 plaquettes are rejected as undersampled.
    pub charge: i32,
}

impl Vortex {
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance_to(&self, other: &Vortex) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A room (+1) with its guest (−1), or a vacant room left by an
/// annihilated pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VortexPair {
    pub room: Vortex,
    pub guest: Option<Vortex>,
    pub separation: Option<f64>,
    pub annihilated: bool,
}

/// Which side of the half-integer transition a charge sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Integer,
    PreHalf,
    Half,
    PostHalf,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Integer => "INTEGER",
            Regime::PreHalf => "PRE_HALF",
            Regime::Half => "HALF",
            Regime::PostHalf => "POST_HALF",
        }
    }
}

/// The hotel-correspondence reading of a detection pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum Correspondence {
    #[serde(rename = "FINITE")]
    Finite,
    #[serde(rename = "INF_TO_INF")]
    InfToInf,
    #[serde(rename = "INF_PLUS_ONE_TO_INF")]
    InfPlusOneToInf,
}

impl Correspondence {
    pub fn name(self) -> &'static str {
        match self {
            Correspondence::Finite => "FINITE",
            Correspondence::InfToInf => "INF_TO_INF",
            Correspondence::InfPlusOneToInf => "INF_PLUS_ONE_TO_INF",
        }
    }
}

/// Full bookkeeping for one charge value: the central vortex representing
/// the integer part, the room/guest pairs ordered outward along the cut,
/// and the regime/correspondence classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HotelState {
    pub mu: f64,
    pub central_charge: i64,
    pub pairs: Vec<VortexPair>,
    pub regime: Regime,
    pub correspondence: Correspondence,
}

impl HotelState {
    pub fn surviving_pairs(&self) -> usize {
        self.pairs.iter().filter(|p| !p.annihilated).count()
    }

    pub fn annihilated_pairs(&self) -> usize {
        self.pairs.iter().filter(|p| p.annihilated).count()
    }
}

/// Per-pixel principal argument in [0, 2π).
///
/// Exact zeros map to phase 0; whether a pixel's phase is *trusted* is
/// decided downstream against an amplitude floor (see [`amplitude_mask`]).
pub fn phase_map(field: &ComplexField) -> ScalarField {
    let values = field
        .values()
        .iter()
        .map(|v| v.im.atan2(v.re).rem_euclid(TAU))
        .collect();
    ScalarField::new(*field.grid(), values)
}

/// Pixels whose modulus clears the floor (phase defined there).
pub fn amplitude_mask(field: &ComplexField, amplitude_floor: f64) -> Vec<bool> {
    field
        .values()
        .iter()
        .map(|v| v.norm() > amplitude_floor)
        .collect()
}

/// Wrap a phase difference into (−π, π].
#[inline]
fn wrap_diff(d: f64) -> f64 {
    let w = d.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Tolerance around ±π inside which a wrapped step is branch-ambiguous.
const BRANCH_EPS: f64 = 1e-12;

fn wrap_checked(d: f64, ix: usize, iy: usize) -> Result<f64> {
    let w = wrap_diff(d);
    if (w.abs() - PI).abs() < BRANCH_EPS {
        return Err(Error::UndersampledPlaquette { ix, iy });
    }
    Ok(w)
}

/// Discrete winding number of the 2×2 plaquette whose lower-left pixel is
/// (ix, iy): the wrapped phase circulation over the loop
/// (ix,iy) → (ix+1,iy) → (ix+1,iy+1) → (ix,iy+1), divided by 2π.
///
/// Exact integer in {−1, 0, +1}; a wrapped edge step within 1e-12 of π is
/// reported as an undersampled plaquette.
pub fn plaquette_winding(phase: &ScalarField, ix: usize, iy: usize) -> Result<i32> {
    let g = phase.grid();
    assert!(
        ix + 1 < g.nx() && iy + 1 < g.ny(),
        "plaquette ({ix},{iy}) is not interior"
    );
    let p00 = phase.at(ix, iy);
    let p10 = phase.at(ix + 1, iy);
    let p11 = phase.at(ix + 1, iy + 1);
    let p01 = phase.at(ix, iy + 1);
    let total = wrap_checked(p10 - p00, ix, iy)?
        + wrap_checked(p11 - p10, ix, iy)?
        + wrap_checked(p01 - p11, ix, iy)?
        + wrap_checked(p00 - p01, ix, iy)?;
    let w = (total / TAU).round();
    debug_assert!((total / TAU - w).abs() < 1e-6);
    Ok(w as i32)
}

/// Locate every singularity: one vortex per nonzero plaquette whose four
/// corners all clear the amplitude floor, positioned at the plaquette
/// center, sorted by distance from the origin.
///
/// A core null can land close enough to a grid node to pull that single
/// pixel under the floor, which silently excludes all four plaquettes
/// containing it. Such an isolated distrusted pixel is recovered by the
/// smallest loop of trusted pixels around it: the winding of its 3×3 ring,
/// with the vortex placed at the pixel itself.
pub fn detect_vortices(field: &ComplexField, amplitude_floor: f64) -> Result<Vec<Vortex>> {
    assert!(amplitude_floor >= 0.0);
    let phase = phase_map(field);
    let mask = amplitude_mask(field, amplitude_floor);
    let g = *field.grid();
    let nx = g.nx();
    let mut found = Vec::new();
    for iy in 0..g.ny() - 1 {
        for ix in 0..nx - 1 {
            if !(mask[iy * nx + ix]
                && mask[iy * nx + ix + 1]
                && mask[(iy + 1) * nx + ix]
                && mask[(iy + 1) * nx + ix + 1])
            {
                continue;
            }
            let w = plaquette_winding(&phase, ix, iy)?;
            if w != 0 {
                found.push(Vortex {
                    x: g.x_at(ix) + 0.5 * g.pitch_x(),
                    y: g.y_at(iy) + 0.5 * g.pitch_y(),
                    charge: w,
                });
            }
        }
    }
    // ring recovery for isolated sub-floor pixels
    for iy in 1..g.ny() - 1 {
        for ix in 1..nx - 1 {
            if mask[iy * nx + ix] {
                continue;
            }
            let ring = [
                (ix - 1, iy - 1),
                (ix, iy - 1),
                (ix + 1, iy - 1),
                (ix + 1, iy),
                (ix + 1, iy + 1),
                (ix, iy + 1),
                (ix - 1, iy + 1),
                (ix - 1, iy),
            ];
            if !ring.iter().all(|&(px, py)| mask[py * nx + px]) {
                continue;
            }
            let mut total = 0.0;
            for i in 0..8 {
                let (ax, ay) = ring[i];
                let (bx, by) = ring[(i + 1) % 8];
                total += wrap_checked(phase.at(bx, by) - phase.at(ax, ay), ax, ay)?;
            }
            let w = (total / TAU).round() as i32;
            if w.abs() > 1 {
                return Err(Error::UndersampledPlaquette { ix, iy });
            }
            if w != 0 {
                found.push(Vortex {
                    x: g.x_at(ix),
                    y: g.y_at(iy),
                    charge: w,
                });
            }
        }
    }
    found.sort_by(|a, b| {
        a.radius()
            .total_cmp(&b.radius())
            .then(a.x.total_cmp(&b.x))
            .then(a.y.total_cmp(&b.y))
    });
    Ok(found)
}

/// Row spans of the pixel disk of given radius, and with them the discrete
/// circle used by [`net_charge`] and its enclosed plaquettes.
#[derive(Debug, Clone)]
pub struct DiskRegion {
    /// (iy, ix_min, ix_max), consecutive rows.
    rows: Vec<(usize, usize, usize)>,
}

impl DiskRegion {
    /// Pixels with x² + y² ≤ radius², grouped by row. Fails unless the disk
    /// is interior to the grid with at least a two-row cross-section.
    pub fn new(grid: &GridSpec, radius: f64) -> Result<Self> {
        if radius <= 0.0 || radius.is_nan() {
            return Err(Error::invalid("radius", "circle radius must be positive"));
        }
        let mut rows = Vec::new();
        for iy in 0..grid.ny() {
            let y = grid.y_at(iy);
            if y.abs() > radius {
                continue;
            }
            let half = (radius * radius - y * y).sqrt();
            let lo = grid
                .x_at(0)
                .max(-half);
            // tight index bounds of |x| <= half
            let pitch = grid.pitch_x();
            let ix_min = ((lo + grid.half_width()) / pitch).ceil() as isize;
            let ix_max = ((half + grid.half_width()) / pitch).floor() as isize;
            if ix_min < 0 || ix_max as usize >= grid.nx() || ix_min > ix_max {
                continue;
            }
            rows.push((iy, ix_min as usize, ix_max as usize));
        }
        if rows.len() < 2 {
            return Err(Error::invalid(
                "radius",
                format!("circle of radius {radius} covers fewer than two pixel rows"),
            ));
        }
        // interior check: the circle must not touch the grid boundary
        let (iy0, ..) = rows[0];
        let (iy1, ..) = rows[rows.len() - 1];
        let touches = iy0 == 0
            || iy1 + 1 >= grid.ny()
            || rows.iter().any(|&(_, l, r)| l == 0 || r + 1 >= grid.nx());
        if touches {
            return Err(Error::invalid(
                "radius",
                format!("circle of radius {radius} is not interior to the grid"),
            ));
        }
        Ok(DiskRegion { rows })
    }

    /// The closed counterclockwise boundary loop through pixel centers:
    /// along the bottom row, up the right staircase, back along the top,
    /// and down the left staircase.
    pub fn boundary_loop(&self) -> Vec<(usize, usize)> {
        let rows = &self.rows;
        let mut path = Vec::new();
        let (y0, l0, r0) = rows[0];
        for ix in l0..=r0 {
            path.push((ix, y0));
        }
        // up the right side
        for w in rows.windows(2) {
            let (ya, _, ra) = w[0];
            let (yb, _, rb) = w[1];
            debug_assert_eq!(yb, ya + 1);
            path.push((ra, yb));
            let mut x = ra;
            while x != rb {
                x = if rb > ra { x + 1 } else { x - 1 };
                path.push((x, yb));
            }
        }
        // back along the top row
        let (yt, lt, rt) = rows[rows.len() - 1];
        let mut x = rt;
        while x != lt {
            x -= 1;
            path.push((x, yt));
        }
        // down the left side
        for w in rows.windows(2).rev() {
            let (ya, la, _) = w[0];
            let (yb, lb, _) = w[1];
            let _ = yb;
            path.push((lb, ya));
            let mut x = lb;
            while x != la {
                x = if la > lb { x + 1 } else { x - 1 };
                path.push((x, ya));
            }
        }
        // drop the duplicated start point; the caller closes the loop
        let first = path[0];
        if *path.last().unwrap() == first {
            path.pop();
        }
        path
    }

    /// Plaquettes enclosed by [`Self::boundary_loop`]: between center rows
    /// iy and iy+1 the loop's verticals sit at columns l[iy+1] (left) and
    /// r[iy] (right), so plaquette (ix, iy) is inside iff
    /// l[iy+1] ≤ ix ≤ r[iy] − 1.
    pub fn enclosed_plaquettes(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for w in self.rows.windows(2) {
            let (iy, _, ra) = w[0];
            let (_, lb, _) = w[1];
            for ix in lb..ra {
                out.push((ix, iy));
            }
        }
        out
    }
}

/// Winding of the phase along the discrete circle of the given radius:
/// the wrapped-difference circulation over [`DiskRegion::boundary_loop`],
/// divided by 2π. By the discrete Stokes identity this equals the sum of
/// the enclosed plaquette windings exactly.
pub fn net_charge(field: &ComplexField, radius: f64, amplitude_floor: f64) -> Result<i64> {
    let region = DiskRegion::new(field.grid(), radius)?;
    let phase = phase_map(field);
    let mask = amplitude_mask(field, amplitude_floor);
    let nx = field.grid().nx();
    let path = region.boundary_loop();
    for &(ix, iy) in &path {
        if !mask[iy * nx + ix] {
            return Err(Error::LowAmplitudePath { ix, iy });
        }
    }
    let mut total = 0.0;
    for i in 0..path.len() {
        let (ax, ay) = path[i];
        let (bx, by) = path[(i + 1) % path.len()];
        total += wrap_checked(phase.at(bx, by) - phase.at(ax, ay), ax, ay)?;
    }
    let w = (total / TAU).round();
    debug_assert!((total / TAU - w).abs() < 1e-6);
    Ok(w as i64)
}

/// The plaquette-sum side of the discrete Stokes identity, for checking
/// [`net_charge`] by an independent route.
pub fn enclosed_winding_sum(
    field: &ComplexField,
    radius: f64,
    amplitude_floor: f64,
) -> Result<i64> {
    let region = DiskRegion::new(field.grid(), radius)?;
    let phase = phase_map(field);
    let mask = amplitude_mask(field, amplitude_floor);
    let nx = field.grid().nx();
    let path = region.boundary_loop();
    for &(ix, iy) in &path {
        if !mask[iy * nx + ix] {
            return Err(Error::LowAmplitudePath { ix, iy });
        }
    }
    let mut total = 0i64;
    for (ix, iy) in region.enclosed_plaquettes() {
        total += plaquette_winding(&phase, ix, iy)? as i64;
    }
    Ok(total)
}
