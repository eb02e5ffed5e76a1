//! Image renderers: phase hue-maps and intensity grayscale.
//!
//! Images are row-major top-to-bottom with the top row at maximum y, so a
//! rendered file displays with the y axis pointing up. Dimensions equal the
//! grid dimensions exactly.

use crate::field::{ComplexField, ScalarField};
use crate::vortex::default_amplitude_floor;
use std::f64::consts::TAU;

/// 8-bit RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    /// Interleaved RGB, row-major from the top row.
    pub data: Vec<u8>,
}

/// 8-bit grayscale raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

/// HSV → RGB with S = V = 1; hue in degrees.
fn hue_to_rgb(h_deg: f64) -> (u8, u8, u8) {
    let h = (h_deg.rem_euclid(360.0)) / 60.0;
    let x = 1.0 - ((h % 2.0) - 1.0).abs();
    let (r, g, b) = match h as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    (
        (r * 255.0).round() as u8,
        (g * 255.0).round() as u8,
        (b * 255.0).round() as u8,
    )
}

/// Render the wrapped phase of a field as a single rainbow sweep:
/// hue runs 240° (blue, phase 0) down to 0° (red, phase 2π) linearly —
/// never through magenta. Pixels below the default amplitude floor are
/// black (phase undefined there).
pub fn render_phase(field: &ComplexField) -> RgbImage {
    render_phase_with_floor(field, default_amplitude_floor(field))
}

/// [`render_phase`] with an explicit amplitude floor.
pub fn render_phase_with_floor(field: &ComplexField, amplitude_floor: f64) -> RgbImage {
    let g = field.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let mut data = vec![0u8; nx * ny * 3];
    for row in 0..ny {
        let iy = ny - 1 - row; // top row = max y
        for ix in 0..nx {
            let v = field.at(ix, iy);
            if v.norm() <= amplitude_floor {
                continue; // black
            }
            let phase = v.im.atan2(v.re).rem_euclid(TAU);
            let hue = 240.0 * (1.0 - phase / TAU);
            let (r, gg, b) = hue_to_rgb(hue);
            let o = (row * nx + ix) * 3;
            data[o] = r;
            data[o + 1] = gg;
            data[o + 2] = b;
        }
    }
    RgbImage {
        width: nx,
        height: ny,
        data,
    }
}

/// Render a nonnegative scalar field to grayscale, mapping [0, max]
/// linearly onto [0, 255]. An identically zero field renders black.
pub fn render_intensity(scalar: &ScalarField) -> GrayImage {
    let g = scalar.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let max = scalar.max().max(0.0);
    let scale = if max > 0.0 { 255.0 / max } else { 0.0 };
    let mut data = vec![0u8; nx * ny];
    for row in 0..ny {
        let iy = ny - 1 - row;
        for ix in 0..nx {
            let v = scalar.at(ix, iy).max(0.0);
            data[row * nx + ix] = (v * scale).round().min(255.0) as u8;
        }
    }
    GrayImage {
        width: nx,
        height: ny,
        data,
    }
}
