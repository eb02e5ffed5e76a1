//! C ABI for the fractional-vortex Hilbert hotel simulator.
//!
//! Handles are opaque; every function returns an [`FvhStatus`] code and
//! writes results through out-pointers. The generated header lives at
//! `include/fvhotel.h` (regenerated by the build script).
//!
//! ```c
//! FvhSim *sim = NULL;
//! fvh_sim_new(632.8e-9, 0.1, 1e-3, 256, 256, &sim);
//! FvhField *field = NULL;
//! fvh_field_compute(sim, 1.5, &field);
//! FvhVortex buf[64];
//! uintptr_t count = 0;
//! fvh_detect(field, 1e-3, buf, 64, &count);
//! char *json = NULL;
//! fvh_hotel_report_json(sim, 1.5, &json);
//! fvh_string_free(json);
//! fvh_field_free(field);
//! fvh_sim_free(sim);
//! ```

use fvhotel::config::{PartialConfig, RunConfig};
use fvhotel::emit::{HotelReport, Provenance};
use fvhotel::field::{
    fractional_field_grid, resolve_truncation, ComplexField, FractionalCharge, GridSpec,
    OpticalConfig, TruncationConfig,
};
use fvhotel::vortex::{detect_vortices, hotel_state, net_charge, DetectionParams};
use libc::{c_char, c_double, c_longlong};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result codes for every C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FvhStatus {
    /// Success.
    FvhOk = 0,
    /// A required pointer argument was null.
    FvhNullPointer = 1,
    /// An argument failed validation (dimensions, ranges, parse errors).
    FvhInvalidArgument = 2,
    /// The computation could not be carried out at this resolution
    /// (undersampled plaquette, inconsistent signs, tracking loss, …).
    FvhNumericalFailure = 3,
    /// The caller-provided buffer cannot hold the result.
    FvhBufferTooSmall = 4,
}

use FvhStatus::*;

/// Opaque simulation context: optics, grid, and detection defaults.
pub struct FvhSim {
    optics: OpticalConfig,
    grid: GridSpec,
    detection: DetectionParams,
    tail_tol: f64,
}

/// Opaque sampled complex field.
pub struct FvhField {
    inner: ComplexField,
}

/// A detected phase singularity.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FvhVortex {
    /// Position in meters.
    pub x: c_double,
    pub y: c_double,
    /// Winding number, exactly −1 or +1.
    pub charge: c_longlong,
}

fn status_of(err: &fvhotel::Error) -> FvhStatus {
    match err.exit_code() {
        1 => FvhInvalidArgument,
        _ => FvhNumericalFailure,
    }
}

fn guarded<F: FnOnce() -> FvhStatus>(f: F) -> FvhStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(FvhNumericalFailure)
}

/// Create a simulation context. `ny = 0` means square (`ny = nx`).
///
/// # Safety
/// `out` must be a valid pointer; the result must be released with
/// [`fvh_sim_free`].
#[no_mangle]
pub unsafe extern "C" fn fvh_sim_new(
    wavelength: c_double,
    distance: c_double,
    half_width: c_double,
    nx: usize,
    ny: usize,
    out: *mut *mut FvhSim,
) -> FvhStatus {
    if out.is_null() {
        return FvhNullPointer;
    }
    guarded(|| {
        let optics = match OpticalConfig::new(wavelength, distance) {
            Ok(o) => o,
            Err(e) => return status_of(&e),
        };
        let grid = match GridSpec::new(half_width, nx, if ny == 0 { nx } else { ny }) {
            Ok(g) => g,
            Err(e) => return status_of(&e),
        };
        let sim = FvhSim {
            optics,
            grid,
            detection: DetectionParams::defaults_for(&grid),
            tail_tol: TruncationConfig::DEFAULT_TAIL_TOL,
        };
        unsafe { *out = Box::into_raw(Box::new(sim)) };
        FvhOk
    })
}

/// Release a simulation context. Null is a no-op.
///
/// # Safety
/// `sim` must come from [`fvh_sim_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fvh_sim_free(sim: *mut FvhSim) {
    if !sim.is_null() {
        drop(unsafe { Box::from_raw(sim) });
    }
}

/// Propagate the plate field of charge `mu` onto the context grid.
///
/// # Safety
/// `sim` and `out` must be valid; the field must be released with
/// [`fvh_field_free`].
#[no_mangle]
pub unsafe extern "C" fn fvh_field_compute(
    sim: *const FvhSim,
    mu: c_double,
    out: *mut *mut FvhField,
) -> FvhStatus {
    if sim.is_null() || out.is_null() {
        return FvhNullPointer;
    }
    let sim = unsafe { &*sim };
    guarded(|| {
        let mu = match FractionalCharge::new(mu) {
            Ok(m) => m,
            Err(e) => return status_of(&e),
        };
        let trunc = match resolve_truncation(mu, &sim.grid, &sim.optics, sim.tail_tol) {
            Ok(t) => t,
            Err(e) => return status_of(&e),
        };
        let field = fractional_field_grid(mu, &sim.grid, &sim.optics, &trunc);
        unsafe { *out = Box::into_raw(Box::new(FvhField { inner: field })) };
        FvhOk
    })
}

/// Release a field. Null is a no-op.
///
/// # Safety
/// `field` must come from [`fvh_field_compute`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fvh_field_free(field: *mut FvhField) {
    if !field.is_null() {
        drop(unsafe { Box::from_raw(field) });
    }
}

/// Grid dimensions of a field.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fvh_field_dims(
    field: *const FvhField,
    nx: *mut usize,
    ny: *mut usize,
) -> FvhStatus {
    if field.is_null() || nx.is_null() || ny.is_null() {
        return FvhNullPointer;
    }
    let f = unsafe { &*field };
    unsafe {
        *nx = f.inner.grid().nx();
        *ny = f.inner.grid().ny();
    }
    FvhOk
}

/// Copy the complex samples out as interleaved (re, im) pairs, row-major
/// with y varying slowest. `capacity` counts doubles and must be at least
/// 2·nx·ny.
///
/// # Safety
/// `out` must point to at least `capacity` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fvh_field_values(
    field: *const FvhField,
    out: *mut c_double,
    capacity: usize,
) -> FvhStatus {
    if field.is_null() || out.is_null() {
        return FvhNullPointer;
    }
    let f = unsafe { &*field };
    let values = f.inner.values();
    if capacity < 2 * values.len() {
        return FvhBufferTooSmall;
    }
    let dst = unsafe { std::slice::from_raw_parts_mut(out, 2 * values.len()) };
    for (pair, v) in dst.chunks_exact_mut(2).zip(values) {
        pair[0] = v.re;
        pair[1] = v.im;
    }
    FvhOk
}

/// Detect phase singularities. `amp_floor_frac` is the trusted-amplitude
/// floor as a fraction of the peak modulus (1e-3 is the usual choice).
/// Writes up to `capacity` vortices ordered by distance from the origin
/// and stores the total detected count; returns `FvhBufferTooSmall` when
/// the buffer cannot hold them all (the count is still stored).
///
/// # Safety
/// `out` must point to at least `capacity` writable entries; `count` must
/// be valid.
#[no_mangle]
pub unsafe extern "C" fn fvh_detect(
    field: *const FvhField,
    amp_floor_frac: c_double,
    out: *mut FvhVortex,
    capacity: usize,
    count: *mut usize,
) -> FvhStatus {
    if field.is_null() || count.is_null() || (out.is_null() && capacity > 0) {
        return FvhNullPointer;
    }
    let f = unsafe { &*field };
    guarded(|| {
        if !(0.0..=1.0).contains(&amp_floor_frac) {
            return FvhInvalidArgument;
        }
        let floor = amp_floor_frac * f.inner.max_modulus();
        let vortices = match detect_vortices(&f.inner, floor) {
            Ok(v) => v,
            Err(e) => return status_of(&e),
        };
        unsafe { *count = vortices.len() };
        let n = vortices.len().min(capacity);
        let dst = unsafe { std::slice::from_raw_parts_mut(out, n) };
        for (d, v) in dst.iter_mut().zip(&vortices) {
            *d = FvhVortex {
                x: v.x,
                y: v.y,
                charge: v.charge as c_longlong,
            };
        }
        if vortices.len() > capacity {
            FvhBufferTooSmall
        } else {
            FvhOk
        }
    })
}

/// Winding of the phase along the discrete circle of `radius` meters.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fvh_net_charge(
    field: *const FvhField,
    radius: c_double,
    amp_floor_frac: c_double,
    out: *mut c_longlong,
) -> FvhStatus {
    if field.is_null() || out.is_null() {
        return FvhNullPointer;
    }
    let f = unsafe { &*field };
    guarded(|| {
        let floor = amp_floor_frac * f.inner.max_modulus();
        match net_charge(&f.inner, radius, floor) {
            Ok(w) => {
                unsafe { *out = w };
                FvhOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Full hotel bookkeeping for charge `mu` on the context grid, as a
/// NUL-terminated JSON document (same schema as the CLI report). Release
/// with [`fvh_string_free`].
///
/// # Safety
/// `sim` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fvh_hotel_report_json(
    sim: *const FvhSim,
    mu: c_double,
    out: *mut *mut c_char,
) -> FvhStatus {
    if sim.is_null() || out.is_null() {
        return FvhNullPointer;
    }
    let sim = unsafe { &*sim };
    guarded(|| {
        let charge = match FractionalCharge::new(mu) {
            Ok(m) => m,
            Err(e) => return status_of(&e),
        };
        let trunc = match resolve_truncation(charge, &sim.grid, &sim.optics, sim.tail_tol) {
            Ok(t) => t,
            Err(e) => return status_of(&e),
        };
        let field = fractional_field_grid(charge, &sim.grid, &sim.optics, &trunc);
        let state = match hotel_state(&field, charge, &sim.detection) {
            Ok(s) => s,
            Err(e) => return status_of(&e),
        };
        // provenance mirrors the CLI path for the same parameters
        let partial = PartialConfig {
            mu: Some(mu),
            lambda: Some(sim.optics.wavelength()),
            z: Some(sim.optics.distance()),
            half_width: Some(sim.grid.half_width()),
            nx: Some(sim.grid.nx()),
            ny: Some(sim.grid.ny()),
            ..Default::default()
        };
        let cfg = match RunConfig::from_partial(&partial) {
            Ok(c) => c,
            Err(e) => return status_of(&e),
        };
        let report = HotelReport::new(&state, Provenance::now(&cfg));
        let json = report.to_json();
        match std::ffi::CString::new(json) {
            Ok(cs) => {
                unsafe { *out = cs.into_raw() };
                FvhOk
            }
            Err(_) => FvhNumericalFailure,
        }
    })
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fvh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { std::ffi::CString::from_raw(s) });
    }
}

/// Static human-readable description of a status code.
#[no_mangle]
pub extern "C" fn fvh_status_message(status: FvhStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        FvhOk => b"ok\0",
        FvhNullPointer => b"null pointer argument\0",
        FvhInvalidArgument => b"invalid argument\0",
        FvhNumericalFailure => b"numerical failure\0",
        FvhBufferTooSmall => b"buffer too small\0",
    };
    msg.as_ptr() as *const c_char
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fvh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
