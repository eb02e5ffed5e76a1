//! Sampled complex fields and the optical operations that produce them:
//! plate transmittance, integer-mode propagator, fractional-field series,
//! reference wave, interferograms, and the Fresnel-quadrature oracle.
//!
//! Conventions: lengths in meters, angles in radians, the azimuth φ taken
//! in [0, 2π) with the branch cut along the positive x axis. Grids are
//! Cartesian with pixel (ix, iy) at
//! `(-half_width + ix·pitch, -half_width + iy·pitch)` and values stored
//! row-major, y-fastest-outer (`values[iy·nx + ix]`).

mod oracle;
mod propagate;
mod series;

pub use oracle::{oracle_propagate, oracle_propagate_with, DEFAULT_APERTURE_SAMPLES,
    DEFAULT_APODIZATION_START};
pub use propagate::{
    fractional_field, fractional_field_grid, integer_mode_field, resolve_truncation,
    truncation_floor,
};
pub use series::{fourier_coefficient, reconstruct_phase_series};

use crate::util::cis;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Wavelength and propagation distance; the wavenumber k = 2π/λ is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalConfig {
    wavelength: f64,
    distance: f64,
}

impl OpticalConfig {
    /// Helium-neon line; the experiment the defaults reproduce ran at 632.8 nm.
    pub const DEFAULT_WAVELENGTH: f64 = 632.8e-9;
    pub const DEFAULT_DISTANCE: f64 = 0.1;

    pub fn new(wavelength: f64, distance: f64) -> Result<Self> {
        if wavelength <= 0.0 || !wavelength.is_finite() {
            return Err(Error::invalid(
                "lambda",
                format!("wavelength must be positive and finite, got {wavelength}"),
            ));
        }
        if distance <= 0.0 || !distance.is_finite() {
            return Err(Error::invalid(
                "z",
                format!("propagation distance must be positive and finite, got {distance}"),
            ));
        }
        Ok(OpticalConfig {
            wavelength,
            distance,
        })
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Propagation distance z.
    pub fn distance(&self) -> f64 {
        self.distance
    }

    /// k = 2π/λ in radians per meter.
    pub fn wavenumber(&self) -> f64 {
        TAU / self.wavelength
    }
}

impl Default for OpticalConfig {
    fn default() -> Self {
        OpticalConfig {
            wavelength: Self::DEFAULT_WAVELENGTH,
            distance: Self::DEFAULT_DISTANCE,
        }
    }
}

/// Square-pixel Cartesian sampling window spanning [−half_width, half_width]
/// in both axes, endpoints included: pitch = 2·half_width/(n−1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    half_width: f64,
    nx: usize,
    ny: usize,
}

impl GridSpec {
    pub const MIN_SAMPLES: usize = 16;

    pub fn new(half_width: f64, nx: usize, ny: usize) -> Result<Self> {
        if half_width <= 0.0 || !half_width.is_finite() {
            return Err(Error::invalid(
                "half-width",
                format!("grid half-width must be positive and finite, got {half_width}"),
            ));
        }
        if nx < Self::MIN_SAMPLES || ny < Self::MIN_SAMPLES {
            return Err(Error::invalid(
                if nx < Self::MIN_SAMPLES { "nx" } else { "ny" },
                format!("grid needs at least {} samples per axis, got {nx}x{ny}", Self::MIN_SAMPLES),
            ));
        }
        Ok(GridSpec { half_width, nx, ny })
    }

    pub fn square(half_width: f64, n: usize) -> Result<Self> {
        Self::new(half_width, n, n)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pitch_x(&self) -> f64 {
        2.0 * self.half_width / (self.nx - 1) as f64
    }

    pub fn pitch_y(&self) -> f64 {
        2.0 * self.half_width / (self.ny - 1) as f64
    }

    pub fn x_at(&self, ix: usize) -> f64 {
        -self.half_width + ix as f64 * self.pitch_x()
    }

    pub fn y_at(&self, iy: usize) -> f64 {
        -self.half_width + iy as f64 * self.pitch_y()
    }

    /// Largest radius on the grid (a corner).
    pub fn max_radius(&self) -> f64 {
        self.half_width * std::f64::consts::SQRT_2
    }
}

/// Complex amplitude samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), grid.len(), "value count must match the grid");
        debug_assert!(values.iter().all(|v| v.re.is_finite() && v.im.is_finite()));
        ComplexField { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[iy * self.grid.nx + ix]
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Pixel-wise complex conjugate (flips every vortex charge).
    pub fn conjugate(&self) -> ComplexField {
        ComplexField {
            grid: self.grid,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }
}

/// Real samples on a grid (intensity or wrapped phase).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "value count must match the grid");
        debug_assert!(values.iter().all(|v| v.is_finite()));
        ScalarField { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid.nx + ix]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Symmetric truncation of the mode series: the sum runs n = −n_max ..= n_max.
///
/// The source expansion is an infinite bilateral series; how far to carry it
/// is a numerical policy. `tail_tol` is the relative L∞ change allowed when
/// n_max doubles (see [`resolve_truncation`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    n_max: usize,
    tail_tol: f64,
}

impl TruncationConfig {
    pub const DEFAULT_TAIL_TOL: f64 = 1e-6;

    pub fn new(n_max: usize, tail_tol: f64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::invalid("n-max", "series bound must be at least 1"));
        }
        if tail_tol <= 0.0 || tail_tol.is_nan() {
            return Err(Error::invalid(
                "tail-tol",
                format!("tail tolerance must be positive, got {tail_tol}"),
            ));
        }
        Ok(TruncationConfig { n_max, tail_tol })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    pub fn with_n_max(&self, n_max: usize) -> Self {
        TruncationConfig {
            n_max,
            tail_tol: self.tail_tol,
        }
    }
}

/// Tilted reference wave parameters:
/// E(x, y) = A₀ · e^{−iqx} · exp(−(ρ² − βx)/w²).
///
/// The printed form of the reference uses the full optical wavenumber as the
/// tilt, which produces sub-wavelength fringes no detector resolves; `tilt`
/// generalizes it (set `tilt = k` to recover the printed form). The default
/// is chosen per grid as 2π/(10·pitch): ten-pixel fringes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceWaveParams {
    pub amplitude: f64,
    /// Tilt spatial frequency q in radians per meter, multiplying x = ρcosφ.
    pub tilt: f64,
    /// Beam radius w(z), taken as a direct parameter.
    pub width: f64,
    /// Horizontal shift β of the envelope.
    pub shift: f64,
}

impl ReferenceWaveParams {
    pub const DEFAULT_AMPLITUDE: f64 = 1.0;
    pub const DEFAULT_WIDTH: f64 = 3e-3;

    pub fn new(amplitude: f64, tilt: f64, width: f64, shift: f64) -> Result<Self> {
        if amplitude < 0.0 || amplitude.is_nan() {
            return Err(Error::invalid(
                "ref-amplitude",
                format!("reference amplitude must be nonnegative, got {amplitude}"),
            ));
        }
        if width <= 0.0 || width.is_nan() {
            return Err(Error::invalid(
                "ref-width",
                format!("reference beam width must be positive, got {width}"),
            ));
        }
        if !tilt.is_finite() || !shift.is_finite() {
            return Err(Error::invalid("ref-tilt", "tilt and shift must be finite"));
        }
        Ok(ReferenceWaveParams {
            amplitude,
            tilt,
            width,
            shift,
        })
    }

    /// Default fringe carrier for a grid: period of ten pixels.
    pub fn default_tilt(grid: &GridSpec) -> f64 {
        TAU / (10.0 * grid.pitch_x())
    }

    pub fn defaults_for(grid: &GridSpec) -> Self {
        ReferenceWaveParams {
            amplitude: Self::DEFAULT_AMPLITUDE,
            tilt: Self::default_tilt(grid),
            width: Self::DEFAULT_WIDTH,
            shift: 0.0,
        }
    }
}

/// Topological charge μ of the spiral plate; any finite real value.
/// Integer-ness is decided by |μ − round(μ)| < 1e-9.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalCharge(f64);

impl FractionalCharge {
    pub const INTEGER_EPS: f64 = 1e-9;

    pub fn new(mu: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::invalid(
                "mu",
                format!("topological charge must be finite, got {mu}"),
            ));
        }
        Ok(FractionalCharge(mu))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn is_integer(&self) -> bool {
        (self.0 - self.0.round()).abs() < Self::INTEGER_EPS
    }

    /// Nearest integer (meaningful when `is_integer`).
    pub fn rounded(&self) -> i64 {
        self.0.round() as i64
    }

    /// Fractional part in [0, 1).
    pub fn frac(&self) -> f64 {
        self.0 - self.0.floor()
    }
}

impl std::fmt::Display for FractionalCharge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Plate transmittance t(φ) = e^{iμφ}; unimodular for every input.
pub fn fractional_phase_transmittance(mu: FractionalCharge, phi: f64) -> Complex64 {
    cis(mu.value() * phi)
}

/// Tilted, Gaussian-enveloped reference wave at Cartesian (x, y).
pub fn reference_wave(x: f64, y: f64, params: &ReferenceWaveParams) -> Complex64 {
    let rho_sq = x * x + y * y;
    let envelope = (-(rho_sq - params.shift * x) / (params.width * params.width)).exp();
    params.amplitude * envelope * cis(-params.tilt * x)
}

/// Interference intensity I = |U + E|² of the field with the reference wave.
pub fn interferogram(field: &ComplexField, params: &ReferenceWaveParams) -> ScalarField {
    let grid = *field.grid();
    let mut values = Vec::with_capacity(grid.len());
    for iy in 0..grid.ny() {
        let y = grid.y_at(iy);
        for ix in 0..grid.nx() {
            let x = grid.x_at(ix);
            let e = reference_wave(x, y, params);
            values.push((field.at(ix, iy) + e).norm_sqr());
        }
    }
    ScalarField::new(grid, values)
}
