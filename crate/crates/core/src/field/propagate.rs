//! Paraxial propagation of spiral-phase-plate fields.
//!
//! A unit plane wave through t(φ) = e^{inφ} propagates to
//!
//! ```text
//! U_n(ρ, φ, z) = √(π/8) e^{ikz} e^{inφ} e^{ikρ²/4z} (−i)^{|n|/2} √(kρ²/z)
//!                · [J_{(|n|−1)/2}(x) − i J_{(|n|+1)/2}(x)],   x = kρ²/(4z)
//! ```
//!
//! with |n| in every Bessel/power factor and the sign of n only in e^{inφ};
//! the half-power (−i)^{|n|/2} is the principal branch e^{−iπ|n|/4}. For a
//! fractional charge μ the field is the bilateral series
//!
//! ```text
//! U_μ = (e^{iπμ} sin(πμ)/π) Σ_n U_n/(μ − n),
//! ```
//!
//! truncated symmetrically. Terms die super-algebraically once
//! (|n|+1)/2 exceeds x_max = k·ρ_max²/(4z), which sets the adaptive floor
//! n_max = ⌈2·x_max⌉ + 24.

use super::{ComplexField, FractionalCharge, GridSpec, OpticalConfig, TruncationConfig};
use crate::specfun::{scaled_bessel_pair, scaled_pair_ladder};
use crate::util::{cis, cis_pi, sin_pi};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// e^{−iπm/4} for m = 0..7; (−i)^{|n|/2} = BRANCH[|n| mod 8].
fn branch_table() -> [Complex64; 8] {
    std::array::from_fn(|m| cis(-PI * m as f64 / 4.0))
}

const SQRT_PI_OVER_2: f64 = 1.253_314_137_315_500_3; // √(π/2)

/// Propagated field of an integer-charge vortex beam (unit plane-wave input).
///
/// Finite everywhere including ρ = 0, where every charged mode vanishes and
/// the n = 0 mode equals the plane wave e^{ikz}.
pub fn integer_mode_field(n: i64, rho: f64, phi: f64, optics: &OpticalConfig) -> Complex64 {
    assert!(rho >= 0.0, "radial coordinate must be nonnegative");
    let k = optics.wavenumber();
    let z = optics.distance();
    let x = k * rho * rho / (4.0 * z);
    let (p1, p2) = scaled_bessel_pair(n, x);
    let an = n.unsigned_abs();
    // √(π/8)·√(kρ²/z) = √(π/2)·√x
    let phase = cis(k * z + n as f64 * phi + x - PI * (an % 8) as f64 / 4.0);
    SQRT_PI_OVER_2 * phase * Complex64::new(p1, -p2)
}

/// Shared series core: Σ_{n=−n_max}^{n_max} U_n/(μ−n) times the prefactor,
/// with the Bessel ladder evaluated once per point.
fn fractional_series_at(
    mu: f64,
    rho: f64,
    phi: f64,
    k: f64,
    z: f64,
    n_max: usize,
    branch: &[Complex64; 8],
) -> Complex64 {
    let x = k * rho * rho / (4.0 * z);
    let pairs = scaled_pair_ladder(n_max, x);
    let m = n_max as i64;
    // e^{inφ} marched by incremental rotation from n = −n_max
    let step = cis(phi);
    let mut rot = cis(-(m as f64) * phi);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in -m..=m {
        let an = n.unsigned_abs() as usize;
        let (p1, p2) = pairs[an];
        acc += rot * branch[an % 8] * Complex64::new(p1, -p2) / (mu - n as f64);
        rot *= step;
    }
    let prefactor = cis_pi(mu) * (sin_pi(mu) / PI);
    prefactor * SQRT_PI_OVER_2 * cis(k * z + x) * acc
}

/// Fractional-charge propagated field at a single point.
///
/// Integer μ (within 1e-9) short-circuits to the integer mode: the series
/// prefactor kills every term except the pole term, whose limit is exactly
/// U_n.
pub fn fractional_field(
    mu: FractionalCharge,
    rho: f64,
    phi: f64,
    optics: &OpticalConfig,
    trunc: &TruncationConfig,
) -> Complex64 {
    if mu.is_integer() {
        return integer_mode_field(mu.rounded(), rho, phi, optics);
    }
    let branch = branch_table();
    fractional_series_at(
        mu.value(),
        rho,
        phi,
        optics.wavenumber(),
        optics.distance(),
        trunc.n_max(),
        &branch,
    )
}

/// Adaptive truncation floor for a grid: ⌈2·x_max⌉ + 24 with
/// x_max = k·ρ_max²/(4z) at the grid corner.
pub fn truncation_floor(grid: &GridSpec, optics: &OpticalConfig) -> usize {
    let rho_max = grid.max_radius();
    let x_max = optics.wavenumber() * rho_max * rho_max / (4.0 * optics.distance());
    (2.0 * x_max).ceil() as usize + 24
}

/// Pixelwise fractional field on a grid, with x = ρcosφ, y = ρsinφ inverted
/// per pixel and φ ∈ [0, 2π) (branch cut along +x).
pub fn fractional_field_grid(
    mu: FractionalCharge,
    grid: &GridSpec,
    optics: &OpticalConfig,
    trunc: &TruncationConfig,
) -> ComplexField {
    let k = optics.wavenumber();
    let z = optics.distance();
    let branch = branch_table();
    let nx = grid.nx();
    let integer = mu.is_integer();
    let m = mu.rounded();
    let mu_val = mu.value();
    let n_max = trunc.n_max();

    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    values
        .par_chunks_mut(nx)
        .enumerate()
        .for_each(|(iy, row)| {
            let y = grid.y_at(iy);
            for (ix, out) in row.iter_mut().enumerate() {
                let x = grid.x_at(ix);
                let rho = x.hypot(y);
                let phi = y.atan2(x).rem_euclid(std::f64::consts::TAU);
                *out = if integer {
                    integer_mode_field(m, rho, phi, optics)
                } else {
                    fractional_series_at(mu_val, rho, phi, k, z, n_max, &branch)
                };
            }
        });
    ComplexField::new(*grid, values)
}

/// Relative L∞ distance between two fields on the same grid.
fn rel_linf(a: &ComplexField, b: &ComplexField) -> f64 {
    let scale = b.max_modulus().max(f64::MIN_POSITIVE);
    a.values()
        .iter()
        .zip(b.values())
        .map(|(u, v)| (u - v).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Starting from the adaptive floor, double n_max until doing so changes the
/// grid field by less than `tail_tol` in relative L∞, and return the last
/// validated bound.
pub fn resolve_truncation(
    mu: FractionalCharge,
    grid: &GridSpec,
    optics: &OpticalConfig,
    tail_tol: f64,
) -> Result<TruncationConfig> {
    let floor = truncation_floor(grid, optics);
    let mut n = floor;
    let mut base = TruncationConfig::new(n, tail_tol)?;
    if mu.is_integer() {
        return Ok(base); // single mode, no series
    }
    let mut f1 = fractional_field_grid(mu, grid, optics, &base);
    for _ in 0..8 {
        let doubled = base.with_n_max(2 * n);
        let f2 = fractional_field_grid(mu, grid, optics, &doubled);
        if rel_linf(&f2, &f1) < tail_tol {
            return Ok(base);
        }
        n *= 2;
        base = doubled;
        f1 = f2;
    }
    Err(Error::Domain(format!(
        "mode series did not converge to tail tolerance {tail_tol} by n_max = {n}"
    )))
}
