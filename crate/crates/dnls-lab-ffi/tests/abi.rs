//! Exercises the C ABI exactly as a foreign caller would: through raw
//! pointers, status codes, out-parameters, and the thread-local error
//! channel.  Everything here goes through the `extern "C"` surface; none of
//! it touches the underlying Rust library directly.

use std::f64::consts::PI;
use std::ffi::{c_char, CStr};
use std::mem::MaybeUninit;
use std::ptr;

use dnls_lab_ffi::*;

/// Fetches the calling thread's last error message through the C channel.
fn last_error() -> String {
    let mut buf = vec![0_u8; 1024];
    let len = unsafe { dnls_last_error_message(buf.as_mut_ptr().cast::<c_char>(), buf.len()) };
    let n = len.min(buf.len() - 1);
    String::from_utf8_lossy(&buf[..n]).into_owned()
}

/// Builds a solitary-wave profile, asserting success.
fn make_soliton(omega: f64, c: f64, n: usize, half_width: f64) -> *mut DnlsField {
    let mut out = ptr::null_mut();
    let status = unsafe { dnls_soliton_profile(omega, c, n, half_width, &mut out) };
    assert_eq!(status, DnlsStatus::Ok, "soliton profile: {}", last_error());
    assert!(!out.is_null());
    out
}

/// Reads a field back into sample vectors through the C interface.
fn samples_of(field: *const DnlsField) -> (Vec<f64>, Vec<f64>) {
    let n = unsafe { dnls_field_len(field) };
    let mut re = vec![0.0_f64; n];
    let mut im = vec![0.0_f64; n];
    let status = unsafe { dnls_field_copy_samples(field, re.as_mut_ptr(), im.as_mut_ptr()) };
    assert_eq!(status, DnlsStatus::Ok, "copy samples: {}", last_error());
    (re, im)
}

#[test]
fn version_is_a_static_nul_terminated_string() {
    let raw = dnls_version();
    assert!(!raw.is_null());
    let text = unsafe { CStr::from_ptr(raw) }.to_str().expect("utf-8");
    assert_eq!(text, env!("CARGO_PKG_VERSION"));
}

#[test]
fn the_error_channel_reports_lengths_and_truncates() {
    // Trigger a domain error on this thread.
    let mut mass = 0.0;
    let status = unsafe { dnls_soliton_mass(1.0, 5.0, &mut mass) };
    assert_eq!(status, DnlsStatus::UnsupportedRegime);

    // A null buffer still reports the length.
    let full_len = unsafe { dnls_last_error_message(ptr::null_mut(), 0) };
    assert!(full_len > 0);
    let message = last_error();
    assert_eq!(message.len(), full_len);
    assert!(
        message.contains("Supercritical"),
        "message should name the regime: {message}"
    );

    // An eight-byte buffer gets a NUL-terminated prefix and the full length.
    let mut small = [0x7f_u8; 8];
    let reported = unsafe { dnls_last_error_message(small.as_mut_ptr().cast::<c_char>(), 8) };
    assert_eq!(reported, full_len);
    assert_eq!(small[7], 0, "terminator must land in the last byte");
    assert_eq!(&small[..7], &message.as_bytes()[..7]);
}

#[test]
fn soliton_profile_round_trips_through_raw_samples() {
    let n = 1024;
    let half_width = 20.0;
    let field = make_soliton(1.0, 0.0, n, half_width);
    assert_eq!(unsafe { dnls_field_len(field) }, n);
    assert_eq!(unsafe { dnls_field_half_width(field) }, half_width);

    // Grid positions span [-L, L) with x_{n/2} = 0.
    let mut xs = vec![0.0_f64; n];
    let status = unsafe { dnls_field_positions(field, xs.as_mut_ptr()) };
    assert_eq!(status, DnlsStatus::Ok);
    assert_eq!(xs[0], -half_width);
    assert_eq!(xs[n / 2], 0.0);

    // Norms match the closed-form squared norm of the amplitude (2*pi at
    // (1, 0)), far below the tail truncation of this box.
    let mut norms = MaybeUninit::<DnlsNorms>::uninit();
    let status = unsafe { dnls_field_norms(field, norms.as_mut_ptr()) };
    assert_eq!(status, DnlsStatus::Ok);
    let norms = unsafe { norms.assume_init() };
    assert!((norms.l2_sq - 2.0 * PI).abs() < 1e-9, "got {}", norms.l2_sq);

    let mut closed_form = 0.0;
    let status = unsafe { dnls_soliton_mass(1.0, 0.0, &mut closed_form) };
    assert_eq!(status, DnlsStatus::Ok);
    assert!((closed_form - 2.0 * PI).abs() < 1e-12);

    // Both stationary residuals vanish to the truncation level of this box
    // (the wider default grid pushes them below 1e-10).
    let (mut semi, mut quasi) = (f64::NAN, f64::NAN);
    let status = unsafe { dnls_soliton_residuals(field, 1.0, 0.0, &mut semi, &mut quasi) };
    assert_eq!(status, DnlsStatus::Ok);
    assert!(semi < 1e-6, "semilinear residual {semi}");
    assert!(quasi < 1e-6, "quasilinear residual {quasi}");

    // Export the samples, rebuild a field from them, and compare: the copy
    // is bit-exact, so the distance is exactly zero.
    let (re, im) = samples_of(field);
    let mut rebuilt = ptr::null_mut();
    let status = unsafe {
        dnls_field_from_samples(n, half_width, re.as_ptr(), im.as_ptr(), &mut rebuilt)
    };
    assert_eq!(status, DnlsStatus::Ok, "{}", last_error());
    let mut distance = f64::NAN;
    let status = unsafe { dnls_field_l2_distance(field, rebuilt, &mut distance) };
    assert_eq!(status, DnlsStatus::Ok);
    assert_eq!(distance, 0.0);

    // The soliton sits at its own action level: J equals the closed-form
    // threshold to quadrature accuracy and K vanishes.
    let mut report = MaybeUninit::<DnlsFunctionalReport>::uninit();
    let status = unsafe { dnls_functionals(field, 1.0, 0.0, report.as_mut_ptr()) };
    assert_eq!(status, DnlsStatus::Ok);
    let report = unsafe { report.assume_init() };
    assert!((report.mass - PI).abs() < 1e-9, "M = {}", report.mass);
    assert!(report.energy.abs() < 1e-8, "E = {}", report.energy);
    assert!(report.nehari.abs() < 1e-8, "K = {}", report.nehari);
    let mut level = 0.0;
    let status = unsafe { dnls_soliton_action_level(1.0, 0.0, &mut level) };
    assert_eq!(status, DnlsStatus::Ok);
    assert!((report.action - level).abs() < 1e-8);

    unsafe {
        dnls_field_free(field);
        dnls_field_free(rebuilt);
    }
}

#[test]
fn a_small_field_lands_in_k_plus_with_a_certificate() {
    let n = 1024;
    let field = make_soliton(1.0, 0.0, n, 20.0);
    let (re, im): (Vec<f64>, Vec<f64>) = {
        let (re, im) = samples_of(field);
        (
            re.iter().map(|v| 0.1 * v).collect(),
            im.iter().map(|v| 0.1 * v).collect(),
        )
    };
    let mut small = ptr::null_mut();
    let status =
        unsafe { dnls_field_from_samples(n, 20.0, re.as_ptr(), im.as_ptr(), &mut small) };
    assert_eq!(status, DnlsStatus::Ok, "{}", last_error());

    let mut verdict = MaybeUninit::<DnlsClassification>::uninit();
    let status = unsafe { dnls_classify(small, 1.0, 0.0, verdict.as_mut_ptr()) };
    assert_eq!(status, DnlsStatus::Ok, "{}", last_error());
    let verdict = unsafe { verdict.assume_init() };
    assert_eq!(verdict.set, DnlsClassSet::KPlus);
    assert!(verdict.j_value < verdict.j_threshold);
    assert!(verdict.k_value >= 0.0);
    assert!(verdict.has_h1_bound);
    assert!(verdict.h1_bound > 0.0 && verdict.h1_bound.is_finite());

    // On K+ the lower bound for K holds.
    let mut bound = MaybeUninit::<DnlsKBound>::uninit();
    let status = unsafe { dnls_k_lower_bound(small, 1.0, 0.0, bound.as_mut_ptr()) };
    assert_eq!(status, DnlsStatus::Ok, "{}", last_error());
    let bound = unsafe { bound.assume_init() };
    assert!(bound.holds, "lhs {} vs rhs {}", bound.lhs, bound.rhs);

    // Mass 0.01 * 2*pi / 2 is far below the certificate threshold, and the
    // ladder search produces borderline K+ parameters with omega = c*c/4.
    let mut certificate = MaybeUninit::<DnlsCertificate>::uninit();
    let status = unsafe { dnls_certify(small, certificate.as_mut_ptr()) };
    assert_eq!(status, DnlsStatus::Ok, "{}", last_error());
    let certificate = unsafe { certificate.assume_init() };
    assert_eq!(certificate.condition, DnlsCondition::MassBelowTwoPi);
    assert!(certificate.has_admissible_c);
    assert!(certificate.admissible_c > 0.0);
    assert_eq!(certificate.kplus_c, certificate.admissible_c);
    assert_eq!(
        4.0 * certificate.kplus_omega,
        certificate.kplus_c * certificate.kplus_c
    );

    unsafe {
        dnls_field_free(field);
        dnls_field_free(small);
    }
}

#[test]
fn the_gauge_map_round_trips_and_preserves_mass() {
    let field = make_soliton(1.0, 1.0, 1024, 20.0);
    let mut before = MaybeUninit::<DnlsNorms>::uninit();
    assert_eq!(
        unsafe { dnls_field_norms(field, before.as_mut_ptr()) },
        DnlsStatus::Ok
    );
    let before = unsafe { before.assume_init() };

    let mut forward = ptr::null_mut();
    let status = unsafe { dnls_gauge_transform(field, -0.75, &mut forward) };
    assert_eq!(status, DnlsStatus::Ok, "{}", last_error());

    // The map multiplies by a unit phase, so the squared norm survives to
    // rounding.
    let mut after = MaybeUninit::<DnlsNorms>::uninit();
    assert_eq!(
        unsafe { dnls_field_norms(forward, after.as_mut_ptr()) },
        DnlsStatus::Ok
    );
    let after = unsafe { after.assume_init() };
    assert!((after.l2_sq - before.l2_sq).abs() <= 1e-14 * before.l2_sq);

    // The edge density certifies that the running integral lost nothing.
    let mut indicator = f64::NAN;
    assert_eq!(
        unsafe { dnls_gauge_truncation_indicator(forward, &mut indicator) },
        DnlsStatus::Ok
    );
    assert!(indicator < 1e-12, "edge density {indicator}");

    // Undoing the map returns the original field.
    let mut back = ptr::null_mut();
    let status = unsafe { dnls_gauge_transform(forward, 0.75, &mut back) };
    assert_eq!(status, DnlsStatus::Ok, "{}", last_error());
    let mut distance = f64::NAN;
    assert_eq!(
        unsafe { dnls_field_l2_distance(field, back, &mut distance) },
        DnlsStatus::Ok
    );
    assert!(distance < 1e-12, "round-trip distance {distance}");

    unsafe {
        dnls_field_free(field);
        dnls_field_free(forward);
        dnls_field_free(back);
    }
}

#[test]
fn evolution_reports_drift_and_returns_the_final_state() {
    let field = make_soliton(1.0, 0.0, 512, 20.0);

    // Zero steps: the final state is the initial state.
    let mut unchanged = ptr::null_mut();
    let status = unsafe {
        dnls_evolve(
            field,
            1.0,
            0.0,
            0.0,
            1e-3,
            true,
            DNLS_FORM_U,
            ptr::null_mut(),
            &mut unchanged,
        )
    };
    assert_eq!(status, DnlsStatus::Ok, "{}", last_error());
    let mut distance = f64::NAN;
    assert_eq!(
        unsafe { dnls_field_l2_distance(field, unchanged, &mut distance) },
        DnlsStatus::Ok
    );
    assert_eq!(distance, 0.0);

    // Fifty steps: the invariants drift at rounding level.
    let mut drift = MaybeUninit::<DnlsDriftSummary>::uninit();
    let mut evolved = ptr::null_mut();
    let status = unsafe {
        dnls_evolve(
            field,
            1.0,
            0.0,
            0.05,
            1e-3,
            true,
            DNLS_FORM_U,
            drift.as_mut_ptr(),
            &mut evolved,
        )
    };
    assert_eq!(status, DnlsStatus::Ok, "{}", last_error());
    let drift = unsafe { drift.assume_init() };
    assert!(drift.mass < 1e-8, "mass drift {}", drift.mass);
    assert!(drift.momentum < 1e-8, "momentum drift {}", drift.momentum);
    assert!(drift.energy < 1e-8, "energy drift {}", drift.energy);
    assert_eq!(unsafe { dnls_field_len(evolved) }, 512);

    // An unknown equation form is rejected before any stepping.
    let status = unsafe {
        dnls_evolve(
            field,
            1.0,
            0.0,
            0.05,
            1e-3,
            true,
            7,
            ptr::null_mut(),
            ptr::null_mut(),
        )
    };
    assert_eq!(status, DnlsStatus::InvalidArgument);
    assert!(last_error().contains("equation form"));

    unsafe {
        dnls_field_free(field);
        dnls_field_free(unchanged);
        dnls_field_free(evolved);
    }
}

#[test]
fn threshold_minimization_approaches_the_closed_form_level() {
    let mut summary = MaybeUninit::<DnlsMinimizeSummary>::uninit();
    let mut minimizer = ptr::null_mut();
    let status = unsafe {
        dnls_minimize_threshold(1.0, 0.0, 512, 20.0, summary.as_mut_ptr(), &mut minimizer)
    };
    assert_eq!(status, DnlsStatus::Ok, "{}", last_error());
    let summary = unsafe { summary.assume_init() };
    assert!(summary.converged);
    assert!(summary.iterations > 0);
    assert!(summary.k_value.abs() < 1e-6, "K = {}", summary.k_value);

    let mut level = 0.0;
    assert_eq!(
        unsafe { dnls_soliton_action_level(1.0, 0.0, &mut level) },
        DnlsStatus::Ok
    );
    let gap = (summary.j_value - level).abs() / level;
    assert!(gap < 1e-2, "relative gap {gap}");

    assert!(!minimizer.is_null());
    assert_eq!(unsafe { dnls_field_len(minimizer) }, 512);
    unsafe { dnls_field_free(minimizer) };
}

#[test]
fn null_and_malformed_arguments_map_to_statuses() {
    // Null out-pointers are reported, never dereferenced.
    let status = unsafe { dnls_soliton_profile(1.0, 0.0, 64, 10.0, ptr::null_mut()) };
    assert_eq!(status, DnlsStatus::NullArgument);
    assert!(last_error().contains("out"));
    let status = unsafe { dnls_functionals(ptr::null(), 1.0, 0.0, ptr::null_mut()) };
    assert_eq!(status, DnlsStatus::NullArgument);

    // Null handles degrade gracefully on the infallible accessors.
    assert_eq!(unsafe { dnls_field_len(ptr::null()) }, 0);
    assert!(unsafe { dnls_field_half_width(ptr::null()) }.is_nan());
    unsafe { dnls_field_free(ptr::null_mut()) };

    // A sample count that is not a power of two is rejected.
    let re = vec![0.0_f64; 100];
    let im = vec![0.0_f64; 100];
    let mut out = ptr::null_mut();
    let status =
        unsafe { dnls_field_from_samples(100, 10.0, re.as_ptr(), im.as_ptr(), &mut out) };
    assert_eq!(status, DnlsStatus::InvalidArgument);
    assert!(out.is_null(), "out must stay untouched on failure");

    // Non-finite samples are rejected.
    let re = vec![0.0_f64; 64];
    let mut im = vec![0.0_f64; 64];
    im[3] = f64::NAN;
    let status =
        unsafe { dnls_field_from_samples(64, 10.0, re.as_ptr(), im.as_ptr(), &mut out) };
    assert_eq!(status, DnlsStatus::InvalidArgument);

    // Non-finite scalars are rejected before any work happens.
    let mut mass = 0.0;
    let status = unsafe { dnls_soliton_mass(f64::NAN, 0.0, &mut mass) };
    assert_eq!(status, DnlsStatus::InvalidArgument);

    // Domain errors carry the regime in the message.
    let status = unsafe { dnls_soliton_profile(1.0, -2.0, 64, 10.0, &mut out) };
    assert_eq!(status, DnlsStatus::UnsupportedRegime);
    assert!(last_error().contains("CriticalNonpositive"));

    // Distances between fields on different grids are refused.
    let a = make_soliton(1.0, 0.0, 256, 10.0);
    let b = make_soliton(1.0, 0.0, 512, 10.0);
    let mut distance = f64::NAN;
    let status = unsafe { dnls_field_l2_distance(a, b, &mut distance) };
    assert_eq!(status, DnlsStatus::InvalidArgument);
    assert!(last_error().contains("different grids"));
    unsafe {
        dnls_field_free(a);
        dnls_field_free(b);
    }
}

#[test]
fn the_generated_header_covers_the_exported_surface() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/dnls_lab.h");
    let header = std::fs::read_to_string(path).expect("the build script writes the header");
    for needle in [
        "typedef struct DnlsField DnlsField;",
        "DNLS_STATUS_OK",
        "DNLS_STATUS_UNSUPPORTED_REGIME",
        "DNLS_STATUS_INTERNAL_PANIC",
        "DNLS_CLASS_SET_K_PLUS",
        "DNLS_CONDITION_MASS_BELOW_TWO_PI",
        "DNLS_FORM_U",
        "DNLS_FORM_V",
        "dnls_version",
        "dnls_last_error_message",
        "dnls_field_from_samples",
        "dnls_field_clone",
        "dnls_field_free",
        "dnls_field_len",
        "dnls_field_half_width",
        "dnls_field_positions",
        "dnls_field_copy_samples",
        "dnls_field_norms",
        "dnls_field_l2_distance",
        "dnls_soliton_profile",
        "dnls_soliton_mass",
        "dnls_soliton_action_level",
        "dnls_soliton_residuals",
        "dnls_functionals",
        "dnls_gauge_transform",
        "dnls_gauge_truncation_indicator",
        "dnls_classify",
        "dnls_k_lower_bound",
        "dnls_certify",
        "dnls_minimize_threshold",
        "dnls_evolve",
    ] {
        assert!(header.contains(needle), "header lacks {needle}");
    }
}
