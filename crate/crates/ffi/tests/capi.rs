//! Exercises the C ABI exactly as a foreign caller would: through the
//! exported extern "C" functions and raw pointers.

use fvhotel_ffi::*;
use std::ptr;

fn new_sim(nx: usize) -> *mut FvhSim {
    let mut sim: *mut FvhSim = ptr::null_mut();
    let st = unsafe { fvh_sim_new(632.8e-9, 0.1, 1e-3, nx, 0, &mut sim) };
    assert_eq!(st, FvhStatus::FvhOk);
    assert!(!sim.is_null());
    sim
}

#[test]
fn lifecycle_and_field_access() {
    let sim = new_sim(64);
    let mut field: *mut FvhField = ptr::null_mut();
    unsafe {
        assert_eq!(fvh_field_compute(sim, 1.0, &mut field), FvhStatus::FvhOk);
        let (mut nx, mut ny) = (0usize, 0usize);
        assert_eq!(fvh_field_dims(field, &mut nx, &mut ny), FvhStatus::FvhOk);
        assert_eq!((nx, ny), (64, 64));

        let mut values = vec![0.0f64; 2 * nx * ny];
        assert_eq!(
            fvh_field_values(field, values.as_mut_ptr(), values.len()),
            FvhStatus::FvhOk
        );
        // unit plane-wave normalization: |U| near 1 somewhere off-axis
        let mag = (values[2 * (32 * 64 + 10)].powi(2)
            + values[2 * (32 * 64 + 10) + 1].powi(2))
        .sqrt();
        assert!(mag > 0.2 && mag < 2.0, "|U| = {mag}");

        // too-small buffer is reported, not written past
        assert_eq!(
            fvh_field_values(field, values.as_mut_ptr(), 7),
            FvhStatus::FvhBufferTooSmall
        );

        fvh_field_free(field);
        fvh_sim_free(sim);
    }
}

#[test]
fn detection_of_the_unit_vortex() {
    let sim = new_sim(128);
    let mut field: *mut FvhField = ptr::null_mut();
    unsafe {
        assert_eq!(fvh_field_compute(sim, 1.0, &mut field), FvhStatus::FvhOk);
        let mut buf = [FvhVortex {
            x: 0.0,
            y: 0.0,
            charge: 0,
        }; 16];
        let mut count = 0usize;
        assert_eq!(
            fvh_detect(field, 1e-3, buf.as_mut_ptr(), buf.len(), &mut count),
            FvhStatus::FvhOk
        );
        assert_eq!(count, 1);
        assert_eq!(buf[0].charge, 1);
        assert!(buf[0].x.hypot(buf[0].y) < 2e-5);

        let mut net = 0i64;
        assert_eq!(
            fvh_net_charge(field, 0.8e-3, 1e-3, &mut net),
            FvhStatus::FvhOk
        );
        assert_eq!(net, 1);

        // zero-capacity call still reports the count
        let mut count2 = 0usize;
        assert_eq!(
            fvh_detect(field, 1e-3, buf.as_mut_ptr(), 0, &mut count2),
            FvhStatus::FvhBufferTooSmall
        );
        assert_eq!(count2, 1);

        fvh_field_free(field);
        fvh_sim_free(sim);
    }
}

#[test]
fn hotel_report_json_round_trips() {
    let sim = new_sim(256);
    let mut json: *mut libc::c_char = ptr::null_mut();
    unsafe {
        assert_eq!(fvh_hotel_report_json(sim, 1.5, &mut json), FvhStatus::FvhOk);
        let text = std::ffi::CStr::from_ptr(json).to_str().unwrap().to_owned();
        fvh_string_free(json);
        fvh_sim_free(sim);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["regime"], "HALF");
        assert_eq!(value["correspondence"], "INF_TO_INF");
        assert_eq!(value["central_charge"], 1);
    }
}

#[test]
fn null_and_invalid_arguments_are_status_codes() {
    unsafe {
        assert_eq!(
            fvh_sim_new(632.8e-9, 0.1, 1e-3, 64, 0, ptr::null_mut()),
            FvhStatus::FvhNullPointer
        );
        let mut sim: *mut FvhSim = ptr::null_mut();
        // z = 0 is rejected
        assert_eq!(
            fvh_sim_new(632.8e-9, 0.0, 1e-3, 64, 0, &mut sim),
            FvhStatus::FvhInvalidArgument
        );
        // grid too coarse
        assert_eq!(
            fvh_sim_new(632.8e-9, 0.1, 1e-3, 4, 0, &mut sim),
            FvhStatus::FvhInvalidArgument
        );
        let mut field: *mut FvhField = ptr::null_mut();
        assert_eq!(
            fvh_field_compute(ptr::null(), 1.5, &mut field),
            FvhStatus::FvhNullPointer
        );
        // frees tolerate null
        fvh_sim_free(ptr::null_mut());
        fvh_field_free(ptr::null_mut());
        fvh_string_free(ptr::null_mut());
    }
    assert!(!fvh_version().is_null());
    assert!(!fvh_status_message(FvhStatus::FvhBufferTooSmall).is_null());
}

#[test]
fn generated_header_compiles_as_c() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fvhotel.h");
    assert!(header.exists(), "build script must emit the header");
    let out = std::process::Command::new("cc")
        .args(["-std=c99", "-fsyntax-only", "-x", "c"])
        .arg(&header)
        .output()
        .expect("cc available");
    assert!(
        out.status.success(),
        "header failed to compile: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}
