// Frozen reference values are transcribed at full precision; they round
// to the nearest f64 on parse.
#![allow(clippy::excessive_precision)]

//! Numerical toolkit for the fractional-vortex Hilbert hotel.
//!
//! A unit plane wave passes through a spiral phase plate of fractional
//! topological charge `mu` and propagates a distance `z` under the paraxial
//! approximation. The propagated field is an integer-mode series whose modes
//! are half-integer-order Bessel expressions; sweeping `mu` through a
//! half-integer value creates, shifts, and annihilates pairs of opposite
//! phase singularities along the dislocation line — the optical realization
//! of Hilbert's infinite-hotel bookkeeping (every guest moves one room up,
//! leaving a vacancy).
//!
//! The crate is organized around four layers:
//!
//! * [`specfun`] — Bessel functions of the first kind at integer and
//!   half-integer order, plus the gamma function.
//! * [`field`] — plate transmittance, integer-mode propagator, fractional
//!   field series, reference wave, interferograms, and an independent
//!   Fresnel-quadrature oracle used for validation.
//! * [`vortex`] — wrapped-phase extraction, plaquette winding numbers,
//!   singularity detection, room/guest pairing, and regime classification
//!   across a charge sweep.
//! * [`config`] / [`render`] / [`emit`] / [`cli`] — deterministic run
//!   configuration, image renderers, file emitters, and the command-line
//!   driver.

pub mod cli;
pub mod config;
pub mod emit;
mod error;
pub mod field;
pub mod render;
pub mod specfun;
mod util;
pub mod vortex;

pub use error::{Error, Result};
