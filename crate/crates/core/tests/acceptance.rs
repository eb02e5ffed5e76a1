//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line with the measured figure against its pinned tolerance.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use fvhotel::field::{
    fractional_field, fractional_field_grid, integer_mode_field, interferogram,
    oracle_propagate, reconstruct_phase_series, resolve_truncation, ComplexField,
    FractionalCharge, GridSpec, OpticalConfig, ReferenceWaveParams, ScalarField,
    TruncationConfig,
};
use fvhotel::specfun::{bessel_j, HalfIntOrder};
use fvhotel::vortex::{
    default_amplitude_floor, detect_vortices, enclosed_winding_sum, hotel_state, net_charge,
    sweep_track, Correspondence, DetectionParams, Regime, Vortex,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

const LAMBDA: f64 = 632.8e-9;
const Z: f64 = 0.1;

fn optics() -> OpticalConfig {
    OpticalConfig::new(LAMBDA, Z).unwrap()
}

fn charge(mu: f64) -> FractionalCharge {
    FractionalCharge::new(mu).unwrap()
}

fn cis(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}

/// Default-window (512², ±1 mm) fields, shared across criteria.
fn default_field(mu: f64) -> Arc<ComplexField> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<ComplexField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(mu.to_bits())
        .or_insert_with(|| {
            let grid = GridSpec::square(1e-3, 512).unwrap();
            let floor = fvhotel::field::truncation_floor(&grid, &optics());
            let trunc = TruncationConfig::new(floor, 1e-6).unwrap();
            Arc::new(fractional_field_grid(charge(mu), &grid, &optics(), &trunc))
        })
        .clone()
}

fn verdict(name: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {name}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{name}: {detail}");
}

/// Criterion 1 — integer reduction: |U_{1+1e-9} − U_1| / max|U_1| < 1e-4
/// over 100 random points with ρ ≤ 1 mm; runtime under 5 s.
#[test]
fn criterion_1_integer_reduction() {
    const TOL: f64 = 1e-4;
    let start = Instant::now();
    let o = optics();
    let mu = charge(1.0 + 1e-9);
    assert!(!mu.is_integer(), "1 + 1e-9 must take the series path");
    // floor for the sampled disk: x_max = k·(1 mm)²/(4z)
    let x_max = o.wavenumber() * 1e-6 / (4.0 * Z);
    let trunc = TruncationConfig::new((2.0 * x_max).ceil() as usize + 24, 1e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let points: Vec<(f64, f64)> = (0..100)
        .map(|_| (1e-3 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU)))
        .collect();
    let scale = points
        .iter()
        .map(|&(r, p)| integer_mode_field(1, r, p, &o).norm())
        .fold(0.0, f64::max);
    let worst = points
        .iter()
        .map(|&(r, p)| {
            (fractional_field(mu, r, p, &o, &trunc) - integer_mode_field(1, r, p, &o)).norm()
        })
        .fold(0.0, f64::max)
        / scale;
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        "1 (integer reduction)",
        worst < TOL && elapsed < 5.0,
        &format!("max normalized deviation {worst:.2e} (tol {TOL:.0e}), {elapsed:.2} s"),
    );
}

/// Criterion 2 — oracle equivalence: series field vs 1024² Fresnel
/// quadrature (4 mm aperture) at μ = 1.5 on a 256² ±0.5 mm window;
/// relative L2 over the central quarter-window < 5e-2.
#[test]
fn criterion_2_oracle_equivalence() {
    const TOL: f64 = 5e-2;
    let start = Instant::now();
    let o = optics();
    let grid = GridSpec::square(0.5e-3, 256).unwrap();
    let mu = charge(1.5);
    let trunc = resolve_truncation(mu, &grid, &o, 1e-6).unwrap();
    let series = fractional_field_grid(mu, &grid, &o, &trunc);
    let quad = oracle_propagate(mu, &grid, &o, 4e-3);
    let q = 256 / 4;
    let mut num = 0.0;
    let mut den = 0.0;
    for iy in q..256 - q {
        for ix in q..256 - q {
            num += (series.at(ix, iy) - quad.at(ix, iy)).norm_sqr();
            den += quad.at(ix, iy).norm_sqr();
        }
    }
    let rel = (num / den).sqrt();
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        "2 (oracle equivalence)",
        rel < TOL && elapsed < 600.0,
        &format!("central-quarter rel L2 {rel:.2e} (tol {TOL:.0e}), {elapsed:.1} s"),
    );
}

/// Criterion 3 — Fourier reconstruction: max over 1000 samples of
/// φ ∈ [0.05, 2π − 0.05] of |S_2000(1.5, φ) − e^{i·1.5φ}| < 1e-3.
///
/// KNOWN RED. The reconstructed function jumps by |1 − e^{2πiα}| = 2 at
/// φ = 0, and the symmetric partial sum's error at distance d from a jump
/// is the Dirichlet tail, envelope |jump|/(π·N·d): at d = 0.05 and
/// N = 2000 that is 6.4e-3, and the measured maximum (5.5e-3, at the edge
/// sample) matches it. No faithful evaluation of this partial sum meets
/// 1e-3 at these parameters — the bound would need N ≈ 13000 — so the
/// criterion is implemented exactly as stated and left failing rather
/// than weakened. The interior-point checks in the series unit tests all
/// hold.
#[test]
fn criterion_3_fourier_reconstruction() {
    const TOL: f64 = 1e-3;
    let start = Instant::now();
    let alpha = charge(1.5);
    let lo = 0.05;
    let hi = TAU - 0.05;
    let mut worst = 0.0_f64;
    let mut worst_phi = lo;
    for i in 0..1000 {
        let phi = lo + (hi - lo) * i as f64 / 999.0;
        let err = (reconstruct_phase_series(alpha, phi, 2000) - cis(1.5 * phi)).norm();
        if err > worst {
            worst = err;
            worst_phi = phi;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        "3 (Fourier reconstruction)",
        worst < TOL && elapsed < 1.0,
        &format!(
            "max |S_N − e^(iαφ)| = {worst:.2e} at φ = {worst_phi:.3} (tol {TOL:.0e}), {elapsed:.2} s"
        ),
    );
}

/// Criterion 4 — Bessel kernel: three-term recurrence residual
/// ≤ 1e-8·max(1, |J_ν|) over ν ∈ [1/2, 40], x ∈ (0, 100], and half-integer
/// closed-form agreement to 1e-10 relative.
#[test]
fn criterion_4_bessel_kernel() {
    let start = Instant::now();
    let mut worst_resid = 0.0_f64;
    for t in 1..=80 {
        let nu = t as f64 / 2.0;
        let lo = HalfIntOrder::from_twice(t - 2).unwrap();
        let mid = HalfIntOrder::from_twice(t).unwrap();
        let hi = HalfIntOrder::from_twice(t + 2).unwrap();
        let mut x = 0.11;
        while x <= 100.0 {
            let a = bessel_j(lo, x).unwrap();
            let b = bessel_j(mid, x).unwrap();
            let c = bessel_j(hi, x).unwrap();
            let resid = (a + c - (2.0 * nu / x) * b).abs() / b.abs().max(1.0);
            worst_resid = worst_resid.max(resid);
            x *= 1.31;
        }
    }
    let mut worst_closed = 0.0_f64;
    let phalf = HalfIntOrder::from_twice(1).unwrap();
    let mhalf = HalfIntOrder::from_twice(-1).unwrap();
    let mut x = 1e-3;
    while x <= 100.0 {
        let norm = (2.0 / (PI * x)).sqrt();
        let rs = (bessel_j(phalf, x).unwrap() - norm * x.sin()).abs() / (norm * x.sin()).abs();
        let rc = (bessel_j(mhalf, x).unwrap() - norm * x.cos()).abs() / (norm * x.cos()).abs();
        worst_closed = worst_closed.max(rs).max(rc);
        x *= 1.17;
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        "4 (Bessel kernel)",
        worst_resid <= 1e-8 && worst_closed <= 1e-10 && elapsed < 1.0,
        &format!(
            "recurrence residual {worst_resid:.2e} (tol 1e-8), closed-form rel {worst_closed:.2e} (tol 1e-10), {elapsed:.2} s"
        ),
    );
}

/// Criterion 5 — regime reproduction on the default 512² ±1 mm grid:
/// sweep μ ∈ {1, 1.44, 1.5, 1.53, 1.7} → {INTEGER, PRE_HALF, HALF,
/// POST_HALF, POST_HALF}; pair count ≥ 3 at μ = 1.5 and strictly larger on
/// the doubled window; the innermost μ = 1.53 pair survives with separation
/// beyond the gate while an outer pair has annihilated; exactly one vacant
/// room at μ = 1.7.
#[test]
fn criterion_5_regime_reproduction() {
    let start = Instant::now();
    let o = optics();
    let grid = GridSpec::square(1e-3, 512).unwrap();
    let params = DetectionParams::defaults_for(&grid);
    let mus: Vec<FractionalCharge> = [1.0, 1.44, 1.5, 1.53, 1.7]
        .iter()
        .map(|&m| charge(m))
        .collect();
    let trunc = resolve_truncation(charge(1.7), &grid, &o, 1e-6).unwrap();
    let outcome = sweep_track(&mus, &grid, &o, &trunc, &params).unwrap();
    let regimes: Vec<Regime> = outcome.states.iter().map(|s| s.regime).collect();
    let regimes_ok = regimes
        == vec![
            Regime::Integer,
            Regime::PreHalf,
            Regime::Half,
            Regime::PostHalf,
            Regime::PostHalf,
        ];

    let half_state = &outcome.states[2];
    let pairs_at_half = half_state.surviving_pairs();
    let doubled_grid = GridSpec::square(2e-3, 512).unwrap();
    let doubled_trunc = resolve_truncation(charge(1.5), &doubled_grid, &o, 1e-6).unwrap();
    let doubled_field = fractional_field_grid(charge(1.5), &doubled_grid, &o, &doubled_trunc);
    let doubled_state = hotel_state(
        &doubled_field,
        charge(1.5),
        &DetectionParams::defaults_for(&doubled_grid),
    )
    .unwrap();
    let window_ok = pairs_at_half >= 3 && doubled_state.surviving_pairs() > pairs_at_half;

    let s153 = &outcome.states[3];
    let innermost = &s153.pairs[0];
    let s153_ok = !innermost.annihilated
        && innermost.separation.unwrap() > params.pairing_gate
        && s153.annihilated_pairs() >= 1
        && s153.correspondence == Correspondence::InfPlusOneToInf;

    let s17 = &outcome.states[4];
    let s17_ok = s17.pairs.len() == 1
        && s17.annihilated_pairs() == 1
        && s17.surviving_pairs() == 0
        && s17.correspondence == Correspondence::InfPlusOneToInf;

    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        "5 (regime reproduction)",
        regimes_ok && window_ok && s153_ok && s17_ok && elapsed < 300.0,
        &format!(
            "regimes {regimes:?}; pairs at 1.5: {pairs_at_half} (doubled window: {}); 1.53 innermost separation {:.3e} m > gate {:.3e} m with {} annihilated; 1.7 vacancies {}; {elapsed:.1} s",
            doubled_state.surviving_pairs(),
            innermost.separation.unwrap_or(0.0),
            params.pairing_gate,
            s153.annihilated_pairs(),
            s17.annihilated_pairs()
        ),
    );
}

/// Criterion 6 — net-charge step: winding at radius 0.8 mm is 1 at μ = 1.44
/// and 2 at μ = 1.7, and equals the interior plaquette sum exactly.
#[test]
fn criterion_6_net_charge_step() {
    let start = Instant::now();
    let f144 = default_field(1.44);
    let f17 = default_field(1.7);
    let radius = 0.8e-3;
    let fl144 = default_amplitude_floor(&f144);
    let fl17 = default_amplitude_floor(&f17);
    let b144 = net_charge(&f144, radius, fl144).unwrap();
    let i144 = enclosed_winding_sum(&f144, radius, fl144).unwrap();
    let b17 = net_charge(&f17, radius, fl17).unwrap();
    let i17 = enclosed_winding_sum(&f17, radius, fl17).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        "6 (net-charge step)",
        b144 == 1 && i144 == 1 && b17 == 2 && i17 == 2,
        &format!(
            "mu=1.44: boundary {b144} interior {i144} (want 1); mu=1.7: boundary {b17} interior {i17} (want 2); {elapsed:.1} s"
        ),
    );
}

// ---------------------------------------------------------------------
// Criterion 7 machinery: fringe analysis of the synthesized interferogram.
// The carrier phase is recovered by demodulating the intensity at the tilt
// frequency (a one-period boxcar kills both the carrier and its conjugate
// exactly); a fringe termination is a nonzero winding of the demodulated
// phase, and its winding equals the fringe-count difference across it.
// ---------------------------------------------------------------------

struct FringeDislocation {
    ix: f64, // pixel units, plaquette center
    iy: f64,
    count_step: i32,
}

fn demod_dislocations(intensity: &ScalarField, tilt: f64, margin: usize) -> Vec<FringeDislocation> {
    let g = intensity.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let period = TAU / (tilt * g.pitch_x());
    let k = period.round() as usize;
    assert!(
        (period - k as f64).abs() < 1e-9,
        "carrier must be pixel-periodic for exact demodulation"
    );
    let half = k / 2;
    // demodulate: Z = I·e^{−iqx}, then average over one carrier period
    let mut dem = vec![Complex64::new(0.0, 0.0); nx * ny];
    for iy in 0..ny {
        let z: Vec<Complex64> = (0..nx)
            .map(|ix| intensity.at(ix, iy) * cis(-tilt * g.x_at(ix)))
            .collect();
        for j in half..nx - half {
            let acc: Complex64 = z[j - half..j + k - half].iter().sum();
            dem[iy * nx + j] = acc;
        }
    }
    let wrap = |d: f64| {
        let w = d.rem_euclid(TAU);
        if w > PI {
            w - TAU
        } else {
            w
        }
    };
    let mut out = Vec::new();
    for iy in margin..ny - 1 - margin {
        for ix in margin..nx - 1 - margin {
            let p = |a: usize, b: usize| {
                let v = dem[b * nx + a];
                v.im.atan2(v.re)
            };
            let total = wrap(p(ix + 1, iy) - p(ix, iy))
                + wrap(p(ix + 1, iy + 1) - p(ix + 1, iy))
                + wrap(p(ix, iy + 1) - p(ix + 1, iy + 1))
                + wrap(p(ix, iy) - p(ix, iy + 1));
            let w = (total / TAU).round() as i32;
            if w != 0 {
                out.push(FringeDislocation {
                    ix: ix as f64 + 0.5,
                    iy: iy as f64 + 0.5,
                    count_step: w,
                });
            }
        }
    }
    out
}

/// Count intensity maxima along row `iy` for ix in [lo, hi].
fn count_maxima(intensity: &ScalarField, iy: usize, lo: usize, hi: usize) -> i32 {
    let mut c = 0;
    for ix in lo.max(1)..hi.min(intensity.grid().nx() - 1) {
        let v = intensity.at(ix, iy);
        if v > intensity.at(ix - 1, iy) && v >= intensity.at(ix + 1, iy) {
            c += 1;
        }
    }
    c
}

fn pixel_coords(v: &Vortex, g: &GridSpec) -> (f64, f64) {
    (
        (v.x + g.half_width()) / g.pitch_x(),
        (v.y + g.half_width()) / g.pitch_y(),
    )
}

/// Criterion 7 — fork structure: the μ = 1 interferogram at default tilt
/// carries exactly one fringe-termination dislocation, within 2 pixels of
/// the detected vortex and with unit fringe-count mismatch; at μ = 1.5 the
/// fork orientations alternate along the cut, each coincident with the
/// matching detected vortex.
#[test]
fn criterion_7_fork_structure() {
    let start = Instant::now();
    let grid = GridSpec::square(1e-3, 512).unwrap();
    let reference = ReferenceWaveParams::defaults_for(&grid);
    let margin = 16;

    // μ = 1: a single fork
    let f1 = default_field(1.0);
    let i1 = interferogram(&f1, &reference);
    let v1 = detect_vortices(&f1, default_amplitude_floor(&f1)).unwrap();
    let dis1 = demod_dislocations(&i1, reference.tilt, margin);
    let (vx, vy) = pixel_coords(&v1[0], &grid);
    let single_ok = v1.len() == 1
        && dis1.len() == 1
        && (dis1[0].ix - vx).hypot(dis1[0].iy - vy) <= 2.0
        && dis1[0].count_step == v1[0].charge;

    // literal fringe counting across the singularity: one extra fringe
    let (ivx, ivy) = (vx.round() as usize, vy.round() as usize);
    let above = count_maxima(&i1, ivy + 20, ivx - 35, ivx + 36);
    let below = count_maxima(&i1, ivy - 20, ivx - 35, ivx + 36);
    let count_ok = (above - below).abs() == 1;

    // μ = 1.5: alternating forks along the cut
    let f15 = default_field(1.5);
    let i15 = interferogram(&f15, &reference);
    let params = DetectionParams::defaults_for(&grid);
    let v15: Vec<Vortex> = detect_vortices(&f15, default_amplitude_floor(&f15))
        .unwrap()
        .into_iter()
        .filter(|v| v.radius() <= params.trust_radius)
        .collect();
    let dis15 = demod_dislocations(&i15, reference.tilt, margin);
    let mut alternation_ok = v15.len() >= 7;
    let mut coincidence_ok = true;
    for (i, v) in v15.iter().skip(1).enumerate() {
        let want = if i % 2 == 0 { 1 } else { -1 };
        alternation_ok &= v.charge == want;
        let (px, py) = pixel_coords(v, &grid);
        let nearest = dis15
            .iter()
            .map(|d| ((d.ix - px).hypot(d.iy - py), d.count_step))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        match nearest {
            Some((dist, step)) => coincidence_ok &= dist <= 2.0 && step == v.charge,
            None => coincidence_ok = false,
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        "7 (fork structure)",
        single_ok && count_ok && alternation_ok && coincidence_ok,
        &format!(
            "mu=1: {} dislocation(s), fringe mismatch {}; mu=1.5: {} cut vortices, orientations alternate and coincide within 2 px; {elapsed:.1} s",
            dis1.len(),
            above - below,
            v15.len().saturating_sub(1)
        ),
    );
}

/// Criterion 8 — determinism and round-trip: identical configurations give
/// byte-identical CSV/PPM/PGM/JSON (timestamp key excluded), and every
/// emitted report re-parses to an equal value.
#[test]
fn criterion_8_determinism_round_trip() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let code = fvhotel::cli::run_cli([
            "fvhotel",
            "hotel",
            "--mu",
            "1.44",
            "--nx",
            "256",
            "--out-dir",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "hotel run failed");
        out
    };
    let a = run("a");
    let b = run("b");

    let bytes = |p: &std::path::Path| std::fs::read(p).unwrap();
    let csv_ok = bytes(&a.join("field.csv")) == bytes(&b.join("field.csv"));
    let ppm_ok = bytes(&a.join("phase.ppm")) == bytes(&b.join("phase.ppm"));
    let pgm_ok = bytes(&a.join("intensity.pgm")) == bytes(&b.join("intensity.pgm"));

    let mask_ts = |p: &std::path::Path| {
        let text = std::fs::read_to_string(p).unwrap();
        text.lines()
            .filter(|l| !l.contains("timestamp_unix"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let json_ok = mask_ts(&a.join("report.json")) == mask_ts(&b.join("report.json"));

    // round-trip: the emitted report re-parses to an equal value
    let text = std::fs::read_to_string(a.join("report.json")).unwrap();
    let report = fvhotel::emit::HotelReport::from_json(&text).unwrap();
    let reparsed = fvhotel::emit::HotelReport::from_json(&report.to_json()).unwrap();
    let round_trip_ok = reparsed == report && report.regime == "PRE_HALF";

    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        "8 (determinism and round-trip)",
        csv_ok && ppm_ok && pgm_ok && json_ok && round_trip_ok,
        &format!(
            "csv {csv_ok}, ppm {ppm_ok}, pgm {pgm_ok}, json-sans-timestamp {json_ok}, report round-trip {round_trip_ok}; {elapsed:.1} s"
        ),
    );
}
