//! C ABI for the `dnls-lab` numerical laboratory.
//!
//! This crate exposes the field-level operations of [`dnls_lab`] — solitary
//! wave profiles, conserved functionals, gauge transforms, threshold
//! minimization, invariant-set classification, global-existence certificates,
//! and time evolution — through a flat C interface, so the laboratory can be
//! driven from C, Python (`ctypes`/`cffi`), Julia, or anything else with a C
//! FFI.  Building the crate regenerates the matching header at
//! `include/dnls_lab.h`.
//!
//! # Conventions
//!
//! - **Handles.** Sampled fields cross the boundary as opaque `DnlsField*`
//!   pointers.  Every handle received through an out-parameter is owned by
//!   the caller and must be released exactly once with `dnls_field_free()`.
//! - **Statuses.** Every fallible function returns a [`DnlsStatus`];
//!   `DNLS_STATUS_OK` (zero) means success, and out-parameters are written
//!   only on success.
//! - **Error text.** Failures leave a human-readable message in thread-local
//!   storage; fetch it with `dnls_last_error_message()`.
//! - **Null pointers** are detected and reported as
//!   `DNLS_STATUS_NULL_ARGUMENT`, never dereferenced.  Out-parameters
//!   documented as optional may be null to skip that output.
//! - **Panics** never unwind across the boundary: every entry point catches
//!   them and reports `DNLS_STATUS_INTERNAL_PANIC` instead.
//!
//! File I/O, trace directories, and the convergence driver stay in the
//! `dnls-lab` command-line tool; this layer works on in-memory fields and
//! numbers only.

#![deny(unsafe_op_in_unsafe_fn)]
#![warn(missing_docs)]

use std::cell::RefCell;
use std::ffi::{c_char, c_int};
use std::fmt::Write as _;
use std::panic::{self, AssertUnwindSafe};
use std::ptr;
use std::slice;

use dnls_lab::classify::{certify_global, classify, k_lower_bound, soliton_action_level, ClassSet, Condition};
use dnls_lab::evolve::{evolve, EquationForm, EvolutionConfig};
use dnls_lab::functionals::FunctionalReport;
use dnls_lab::gauge::{gauge_transform, truncation_indicator};
use dnls_lab::grid::{l2_distance, norms};
use dnls_lab::soliton::{
    residual_quasilinear, residual_semilinear, soliton_mass, varphi_profile, SolitonSpec,
};
use dnls_lab::variational::{minimize_threshold, MinimizeOptions};
use dnls_lab::{Complex64, Error, Field, GridSpec, Params};

// ---------------------------------------------------------------------------
// Status codes and the thread-local error message
// ---------------------------------------------------------------------------

/// Result code of every fallible `dnls_*` call; zero means success.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DnlsStatus {
    /// The call succeeded and every requested output was written.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A scalar or size argument was malformed: wrong sample count,
    /// non-finite value, grid size that is not a power of two, unknown
    /// equation form, and the like.
    InvalidArgument = 2,
    /// The (omega, c) pair lies outside the regime the operation is defined
    /// on; solitary-wave operations need 4*omega > c*c, or equality with
    /// c > 0.
    UnsupportedRegime = 3,
    /// A constraint-root search found no sign change, so the field could not
    /// be scaled onto the constraint manifold.
    NoRoot = 4,
    /// An operation that needs a real-valued field received complex samples.
    ComplexInput = 5,
    /// A bound defined only on the K+ set was requested for data outside it.
    NotInKPlus = 6,
    /// Time evolution produced a non-finite sample (a blow-up indicator).
    NonFinite = 7,
    /// A file could not be parsed.  Reserved: this layer does no file I/O.
    Format = 8,
    /// An operating-system I/O failure.  Reserved: this layer does no file
    /// I/O.
    Io = 9,
    /// A panic was caught at the boundary; the error message carries the
    /// panic text.  Always a bug worth reporting.
    InternalPanic = 10,
}

impl DnlsStatus {
    fn from_error(e: &Error) -> DnlsStatus {
        match e {
            Error::UnsupportedRegime { .. } => DnlsStatus::UnsupportedRegime,
            Error::NoRoot { .. } => DnlsStatus::NoRoot,
            Error::ComplexInput { .. } => DnlsStatus::ComplexInput,
            Error::NotInKPlus { .. } => DnlsStatus::NotInKPlus,
            Error::NonFinite { .. } => DnlsStatus::NonFinite,
            Error::InvalidField { .. } => DnlsStatus::InvalidArgument,
            Error::Format { .. } => DnlsStatus::Format,
            Error::Io { .. } => DnlsStatus::Io,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

/// Records `msg` as the calling thread's last error message.
fn set_last_error(msg: impl std::fmt::Display) {
    LAST_ERROR.with(|slot| {
        let mut slot = slot.borrow_mut();
        slot.clear();
        let _ = write!(slot, "{msg}");
    });
}

/// Records the library error and translates it into a status code.
fn fail(e: &Error) -> DnlsStatus {
    set_last_error(e);
    DnlsStatus::from_error(e)
}

/// Runs `f`, converting any panic into `DNLS_STATUS_INTERNAL_PANIC`.
///
/// `AssertUnwindSafe` is sound here: a panicking call writes none of its
/// outputs and control returns straight to the caller, so no state observed
/// after the catch can be half-updated.
fn guarded(f: impl FnOnce() -> DnlsStatus) -> DnlsStatus {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let text: &str = if let Some(s) = payload.downcast_ref::<&str>() {
                s
            } else if let Some(s) = payload.downcast_ref::<String>() {
                s
            } else {
                "opaque panic payload"
            };
            set_last_error(format!("internal panic: {text}"));
            DnlsStatus::InternalPanic
        }
    }
}

/// Returns `NullArgument` from the enclosing closure when `$ptr` is null.
macro_rules! require {
    ($ptr:expr) => {
        if $ptr.is_null() {
            set_last_error(concat!("null pointer argument: ", stringify!($ptr)));
            return DnlsStatus::NullArgument;
        }
    };
}

/// Unwraps a library `Result`, returning the mapped status on error.
macro_rules! try_lib {
    ($expr:expr) => {
        match $expr {
            Ok(value) => value,
            Err(ref e) => return fail(e),
        }
    };
}

/// Bundles (omega, c) after rejecting non-finite values.
fn checked_params(omega: f64, c: f64) -> Result<Params, DnlsStatus> {
    if !omega.is_finite() || !c.is_finite() {
        set_last_error(format!(
            "parameters must be finite, got (omega, c) = ({omega}, {c})"
        ));
        return Err(DnlsStatus::InvalidArgument);
    }
    Ok(Params::new(omega, c))
}

/// Unwraps a `Result<_, DnlsStatus>` produced by an argument check.
macro_rules! try_arg {
    ($expr:expr) => {
        match $expr {
            Ok(value) => value,
            Err(status) => return status,
        }
    };
}

// ---------------------------------------------------------------------------
// The opaque field handle
// ---------------------------------------------------------------------------

/// A complex field sampled on its uniform periodic grid.
///
/// Opaque: create one with `dnls_field_from_samples()`,
/// `dnls_soliton_profile()`, or any function with a `DnlsField**`
/// out-parameter, and release it with `dnls_field_free()`.
pub struct DnlsField {
    inner: Field,
}

fn into_handle(inner: Field) -> *mut DnlsField {
    Box::into_raw(Box::new(DnlsField { inner }))
}

// ---------------------------------------------------------------------------
// Plain-data result structs
// ---------------------------------------------------------------------------

/// The four norm quantities every functional is assembled from.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DnlsNorms {
    /// Integral of |f|^2.
    pub l2_sq: f64,
    /// Integral of |f'|^2.
    pub h1dot_sq: f64,
    /// Integral of |f|^4.
    pub l4_4: f64,
    /// Integral of |f|^6.
    pub l6_6: f64,
}

/// The eight functional values reported for a field at fixed (omega, c).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DnlsFunctionalReport {
    /// Mass M, half the integral of |u|^2.
    pub mass: f64,
    /// Momentum P.
    pub momentum: f64,
    /// Energy E.
    pub energy: f64,
    /// Action J = E + omega*M + c*P.
    pub action: f64,
    /// Constraint functional K.
    pub nehari: f64,
    /// Quadratic-dominated part KQ of the split K = KQ - KN.
    pub quadratic_part: f64,
    /// Nonlinear part KN of the split.
    pub nonlinear_part: f64,
    /// The nonnegative functional H controlling the derivative norm.
    pub positive_part: f64,
}

/// Membership verdict of `dnls_classify()`.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DnlsClassSet {
    /// Action below the threshold and K >= 0: bounded orbits.
    KPlus = 0,
    /// Action below the threshold and K < 0: the complementary invariant
    /// set.
    KMinus = 1,
    /// Action at or above the threshold: outside the dichotomy.
    AboveThreshold = 2,
}

impl From<ClassSet> for DnlsClassSet {
    fn from(set: ClassSet) -> DnlsClassSet {
        match set {
            ClassSet::KPlus => DnlsClassSet::KPlus,
            ClassSet::KMinus => DnlsClassSet::KMinus,
            ClassSet::AboveThreshold => DnlsClassSet::AboveThreshold,
        }
    }
}

/// Everything `dnls_classify()` reports.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DnlsClassification {
    /// Action J of the field.
    pub j_value: f64,
    /// Constraint functional K of the field.
    pub k_value: f64,
    /// Threshold the action was compared against (the soliton action level).
    pub j_threshold: f64,
    /// Membership verdict.
    pub set: DnlsClassSet,
    /// True when `h1_bound` is meaningful (K+ members only).
    pub has_h1_bound: bool,
    /// A priori bound on the squared derivative norm along the flow, valid
    /// while the solution stays in K+.
    pub h1_bound: f64,
}

/// Which clause of the mass-threshold certificate matched.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DnlsCondition {
    /// Mass strictly below 2*pi.
    MassBelowTwoPi = 0,
    /// Mass at 2*pi (within tolerance) with negative momentum.
    MassEqNegMomentum = 1,
    /// Mass at 2*pi, momentum at zero, negative energy.
    MassEqZeroMomNegEnergy = 2,
    /// No clause matched; no certificate is available.
    NoCertificate = 3,
}

impl From<Condition> for DnlsCondition {
    fn from(condition: Condition) -> DnlsCondition {
        match condition {
            Condition::MassBelow2Pi => DnlsCondition::MassBelowTwoPi,
            Condition::MassEqNegMomentum => DnlsCondition::MassEqNegMomentum,
            Condition::MassEqZeroMomNegEnergy => DnlsCondition::MassEqZeroMomNegEnergy,
            Condition::None => DnlsCondition::NoCertificate,
        }
    }
}

/// Outcome of `dnls_certify()`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DnlsCertificate {
    /// The certificate clause the field satisfied, if any.
    pub condition: DnlsCondition,
    /// True when the ladder search found a speed landing the field in K+ at
    /// borderline parameters; the three fields below are NaN otherwise.
    pub has_admissible_c: bool,
    /// A speed c at which the field lies in K+ at (c*c/4, c).
    pub admissible_c: f64,
    /// Frequency of those borderline parameters, exactly c*c/4.
    pub kplus_omega: f64,
    /// Speed of those borderline parameters, equal to `admissible_c`.
    pub kplus_c: f64,
}

/// Lower-bound verification for K on the K+ set:
/// K >= min{4*(threshold - J), quarter of the shifted-derivative energy}.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DnlsKBound {
    /// K itself.
    pub lhs: f64,
    /// The smaller of the two candidate lower bounds.
    pub rhs: f64,
    /// Whether lhs >= rhs within a small solver slack.
    pub holds: bool,
}

/// Scalar summary of `dnls_minimize_threshold()`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DnlsMinimizeSummary {
    /// Action value of the minimizer; approximates the soliton action level.
    pub j_value: f64,
    /// Constraint value of the minimizer (machine-zero after the final
    /// projection).
    pub k_value: f64,
    /// Descent iterations performed.
    pub iterations: usize,
    /// Whether the objective plateaued before the iteration cap.
    pub converged: bool,
}

/// Worst relative drift of each conserved quantity over an evolution run,
/// max over every step of |Q(t) - Q(0)| / max(|Q(0)|, 1).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DnlsDriftSummary {
    /// Relative mass drift.
    pub mass: f64,
    /// Relative momentum drift.
    pub momentum: f64,
    /// Relative energy drift.
    pub energy: f64,
}

/// Principal equation form (the variable the solitary waves are written in).
pub const DNLS_FORM_U: c_int = 0;
/// Divergence form, reachable from the principal form by the gauge map with
/// a = -3/4.
pub const DNLS_FORM_V: c_int = 1;

// ---------------------------------------------------------------------------
// Version and error retrieval
// ---------------------------------------------------------------------------

/// Returns the library's semantic version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dnls_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's most recent error message into `buffer` as a
/// NUL-terminated string, truncating when it does not fit.
///
/// Returns the full message length in bytes (excluding the terminator), so a
/// return value of `capacity` or more signals truncation.  A null `buffer` or
/// zero `capacity` performs no copy and just reports the length.
///
/// # Safety
///
/// `buffer`, when non-null, must point to at least `capacity` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn dnls_last_error_message(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes();
        if !buffer.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity - 1);
            // SAFETY: the caller promises `capacity` writable bytes and
            // n + 1 <= capacity.
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr(), buffer.cast::<u8>(), n);
                buffer.add(n).write(0);
            }
        }
        bytes.len()
    })
}

// ---------------------------------------------------------------------------
// Field lifecycle
// ---------------------------------------------------------------------------

/// Builds a field from `n_points` complex samples, given as separate real and
/// imaginary arrays, on the periodic grid covering [-half_width, half_width).
///
/// `n_points` must be a power of two (at least two) and every sample finite.
/// On success `*out` receives a new handle owned by the caller.
///
/// # Safety
///
/// `re` and `im` must each point to `n_points` readable doubles, and `out`
/// must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn dnls_field_from_samples(
    n_points: usize,
    half_width: f64,
    re: *const f64,
    im: *const f64,
    out: *mut *mut DnlsField,
) -> DnlsStatus {
    guarded(|| {
        require!(out);
        require!(re);
        require!(im);
        let grid = try_lib!(GridSpec::new(n_points, half_width));
        // SAFETY: the caller promises `n_points` readable doubles at both
        // `re` and `im`.
        let (re, im) = unsafe {
            (
                slice::from_raw_parts(re, n_points),
                slice::from_raw_parts(im, n_points),
            )
        };
        let values: Vec<Complex64> = re
            .iter()
            .zip(im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        let field = try_lib!(Field::from_values(&grid, values));
        // SAFETY: `out` is non-null and writable by the caller contract.
        unsafe { out.write(into_handle(field)) };
        DnlsStatus::Ok
    })
}

/// Deep-copies a field handle; `*out` receives the new caller-owned copy.
///
/// # Safety
///
/// `field` must be a live handle from this library, and `out` must be valid
/// for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn dnls_field_clone(
    field: *const DnlsField,
    out: *mut *mut DnlsField,
) -> DnlsStatus {
    guarded(|| {
        require!(field);
        require!(out);
        // SAFETY: non-null handles are live by the caller contract.
        let inner = unsafe { &(*field).inner };
        // SAFETY: `out` is non-null and writable by the caller contract.
        unsafe { out.write(into_handle(inner.clone())) };
        DnlsStatus::Ok
    })
}

/// Releases a field handle.  Passing null is a no-op; anything else must be
/// a handle from this library, released exactly once and not used afterward.
///
/// # Safety
///
/// `field`, when non-null, must be a live handle owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn dnls_field_free(field: *mut DnlsField) {
    if field.is_null() {
        return;
    }
    // SAFETY: the caller surrenders a handle minted by `into_handle`, so the
    // box round-trips through Box::from_raw exactly once.  The catch keeps a
    // (hypothetical) destructor panic from unwinding across the boundary.
    let _ = panic::catch_unwind(AssertUnwindSafe(|| unsafe { drop(Box::from_raw(field)) }));
}

/// Number of samples in the field, or 0 when `field` is null.
///
/// # Safety
///
/// `field`, when non-null, must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn dnls_field_len(field: *const DnlsField) -> usize {
    if field.is_null() {
        return 0;
    }
    // SAFETY: non-null handles are live by the caller contract.
    let inner = unsafe { &(*field).inner };
    inner.grid.n_points
}

/// Half-width L of the field's periodic box [-L, L), or NaN when `field` is
/// null.
///
/// # Safety
///
/// `field`, when non-null, must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn dnls_field_half_width(field: *const DnlsField) -> f64 {
    if field.is_null() {
        return f64::NAN;
    }
    // SAFETY: non-null handles are live by the caller contract.
    let inner = unsafe { &(*field).inner };
    inner.grid.half_width
}

/// Writes the grid positions x_j into `xs`, one double per sample.
///
/// # Safety
///
/// `field` must be a live handle, and `xs` must point to as many writable
/// doubles as the field has samples (see `dnls_field_len()`).
#[no_mangle]
pub unsafe extern "C" fn dnls_field_positions(
    field: *const DnlsField,
    xs: *mut f64,
) -> DnlsStatus {
    guarded(|| {
        require!(field);
        require!(xs);
        // SAFETY: non-null handles are live by the caller contract.
        let inner = unsafe { &(*field).inner };
        // SAFETY: the caller promises `n_points` writable doubles at `xs`.
        let xs = unsafe { slice::from_raw_parts_mut(xs, inner.grid.n_points) };
        for (slot, x) in xs.iter_mut().zip(inner.grid.points()) {
            *slot = x;
        }
        DnlsStatus::Ok
    })
}

/// Copies the field's samples into separate real and imaginary arrays, one
/// double per sample in each.
///
/// # Safety
///
/// `field` must be a live handle, and `re` and `im` must each point to as
/// many writable doubles as the field has samples (see `dnls_field_len()`).
#[no_mangle]
pub unsafe extern "C" fn dnls_field_copy_samples(
    field: *const DnlsField,
    re: *mut f64,
    im: *mut f64,
) -> DnlsStatus {
    guarded(|| {
        require!(field);
        require!(re);
        require!(im);
        // SAFETY: non-null handles are live by the caller contract.
        let inner = unsafe { &(*field).inner };
        let n = inner.grid.n_points;
        // SAFETY: the caller promises `n` writable doubles at both `re` and
        // `im`.
        let (re, im) = unsafe {
            (
                slice::from_raw_parts_mut(re, n),
                slice::from_raw_parts_mut(im, n),
            )
        };
        for ((a, b), v) in re.iter_mut().zip(im.iter_mut()).zip(&inner.values) {
            *a = v.re;
            *b = v.im;
        }
        DnlsStatus::Ok
    })
}

/// Computes the integrals of |f|^2, |f'|^2, |f|^4, and |f|^6 in one pass
/// (the derivative is spectral).
///
/// # Safety
///
/// `field` must be a live handle, and `out` must be valid for writing one
/// `DnlsNorms`.
#[no_mangle]
pub unsafe extern "C" fn dnls_field_norms(
    field: *const DnlsField,
    out: *mut DnlsNorms,
) -> DnlsStatus {
    guarded(|| {
        require!(field);
        require!(out);
        // SAFETY: non-null handles are live by the caller contract.
        let n = norms(unsafe { &(*field).inner });
        // SAFETY: `out` is non-null and writable by the caller contract.
        unsafe {
            out.write(DnlsNorms {
                l2_sq: n.l2_sq,
                h1dot_sq: n.h1dot_sq,
                l4_4: n.l4_4,
                l6_6: n.l6_6,
            })
        };
        DnlsStatus::Ok
    })
}

/// L^2 distance between two fields sampled on the same grid.
///
/// # Safety
///
/// `a` and `b` must be live handles, and `out` must be valid for writing one
/// double.
#[no_mangle]
pub unsafe extern "C" fn dnls_field_l2_distance(
    a: *const DnlsField,
    b: *const DnlsField,
    out: *mut f64,
) -> DnlsStatus {
    guarded(|| {
        require!(a);
        require!(b);
        require!(out);
        // SAFETY: non-null handles are live by the caller contract.
        let (fa, fb) = unsafe { (&(*a).inner, &(*b).inner) };
        if !fa.grid.same_layout(&fb.grid) {
            set_last_error(format!(
                "fields live on different grids: {} points of half-width {} \
                 vs {} points of half-width {}",
                fa.grid.n_points, fa.grid.half_width, fb.grid.n_points, fb.grid.half_width,
            ));
            return DnlsStatus::InvalidArgument;
        }
        // SAFETY: `out` is non-null and writable by the caller contract.
        unsafe { out.write(l2_distance(fa, fb)) };
        DnlsStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Solitary waves and their closed forms
// ---------------------------------------------------------------------------

/// Samples the solitary-wave profile at (omega, c) — the bell-shaped
/// amplitude carrying its speed phase — on a fresh grid of `n_points`
/// samples covering [-half_width, half_width).  On success `*out` receives a
/// new caller-owned handle.
///
/// Requires soliton-bearing parameters: 4*omega > c*c, or equality with
/// c > 0.
///
/// # Safety
///
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn dnls_soliton_profile(
    omega: f64,
    c: f64,
    n_points: usize,
    half_width: f64,
    out: *mut *mut DnlsField,
) -> DnlsStatus {
    guarded(|| {
        require!(out);
        let params = try_arg!(checked_params(omega, c));
        let grid = try_lib!(GridSpec::new(n_points, half_width));
        let spec = try_lib!(SolitonSpec::centered(params));
        let field = try_lib!(varphi_profile(&spec, &grid));
        // SAFETY: `out` is non-null and writable by the caller contract.
        unsafe { out.write(into_handle(field)) };
        DnlsStatus::Ok
    })
}

/// Closed-form squared L^2 norm of the solitary-wave amplitude at
/// (omega, c).  Defined for strictly subcritical parameters
/// (4*omega > c*c); it approaches 4*pi at the critical boundary.
///
/// # Safety
///
/// `out` must be valid for writing one double.
#[no_mangle]
pub unsafe extern "C" fn dnls_soliton_mass(omega: f64, c: f64, out: *mut f64) -> DnlsStatus {
    guarded(|| {
        require!(out);
        let params = try_arg!(checked_params(omega, c));
        let value = try_lib!(soliton_mass(params));
        // SAFETY: `out` is non-null and writable by the caller contract.
        unsafe { out.write(value) };
        DnlsStatus::Ok
    })
}

/// Closed-form action level of the solitary wave at (omega, c): the
/// variational threshold separating the two invariant sets.
///
/// # Safety
///
/// `out` must be valid for writing one double.
#[no_mangle]
pub unsafe extern "C" fn dnls_soliton_action_level(
    omega: f64,
    c: f64,
    out: *mut f64,
) -> DnlsStatus {
    guarded(|| {
        require!(out);
        let params = try_arg!(checked_params(omega, c));
        let value = try_lib!(soliton_action_level(params));
        // SAFETY: `out` is non-null and writable by the caller contract.
        unsafe { out.write(value) };
        DnlsStatus::Ok
    })
}

/// Evaluates the two stationary-equation residuals of `field` at (omega, c),
/// each as a discrete L^2 norm: the semilinear form (with the real cubic
/// term) and the quasilinear form (with the derivative cubic terms).
/// Machine-small values certify a solitary wave.  Either out-pointer may be
/// null to skip that residual.
///
/// # Safety
///
/// `field` must be a live handle; `semilinear` and `quasilinear`, when
/// non-null, must each be valid for writing one double.
#[no_mangle]
pub unsafe extern "C" fn dnls_soliton_residuals(
    field: *const DnlsField,
    omega: f64,
    c: f64,
    semilinear: *mut f64,
    quasilinear: *mut f64,
) -> DnlsStatus {
    guarded(|| {
        require!(field);
        let params = try_arg!(checked_params(omega, c));
        // SAFETY: non-null handles are live by the caller contract.
        let inner = unsafe { &(*field).inner };
        if !semilinear.is_null() {
            // SAFETY: non-null out-pointers are writable by the caller
            // contract.
            unsafe { semilinear.write(residual_semilinear(inner, params)) };
        }
        if !quasilinear.is_null() {
            // SAFETY: as above.
            unsafe { quasilinear.write(residual_quasilinear(inner, params)) };
        }
        DnlsStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Functionals
// ---------------------------------------------------------------------------

/// Evaluates mass, momentum, energy, the action J, the constraint K, its
/// split K = KQ - KN, and the nonnegative functional H for `field` at
/// (omega, c).  Requires parameters where the split is defined:
/// 4*omega > c*c, or equality with c > 0.
///
/// # Safety
///
/// `field` must be a live handle, and `out` must be valid for writing one
/// `DnlsFunctionalReport`.
#[no_mangle]
pub unsafe extern "C" fn dnls_functionals(
    field: *const DnlsField,
    omega: f64,
    c: f64,
    out: *mut DnlsFunctionalReport,
) -> DnlsStatus {
    guarded(|| {
        require!(field);
        require!(out);
        let params = try_arg!(checked_params(omega, c));
        // SAFETY: non-null handles are live by the caller contract.
        let inner = unsafe { &(*field).inner };
        let report = try_lib!(FunctionalReport::evaluate(inner, params));
        // SAFETY: `out` is non-null and writable by the caller contract.
        unsafe {
            out.write(DnlsFunctionalReport {
                mass: report.mass,
                momentum: report.momentum,
                energy: report.energy,
                action: report.action,
                nehari: report.nehari,
                quadratic_part: report.quadratic_part,
                nonlinear_part: report.nonlinear_part,
                positive_part: report.positive_part,
            })
        };
        DnlsStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Gauge transformation
// ---------------------------------------------------------------------------

/// Applies the gauge map with strength `a`: multiplies each sample by
/// exp(i*a*(running integral of |v|^2)).  a = -3/4 carries the principal
/// form to the divergence form and a = +3/4 inverts it; the sample moduli —
/// hence the mass — are preserved exactly.  On success `*out` receives a new
/// caller-owned handle.
///
/// # Safety
///
/// `field` must be a live handle, and `out` must be valid for writing one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn dnls_gauge_transform(
    field: *const DnlsField,
    a: f64,
    out: *mut *mut DnlsField,
) -> DnlsStatus {
    guarded(|| {
        require!(field);
        require!(out);
        if !a.is_finite() {
            set_last_error(format!("gauge strength must be finite, got {a}"));
            return DnlsStatus::InvalidArgument;
        }
        // SAFETY: non-null handles are live by the caller contract.
        let inner = unsafe { &(*field).inner };
        let transformed = gauge_transform(inner, a);
        // SAFETY: `out` is non-null and writable by the caller contract.
        unsafe { out.write(into_handle(transformed)) };
        DnlsStatus::Ok
    })
}

/// Mass density |v(-L)|^2 at the left edge of the box: the indicator of how
/// much mass the gauge phase's running integral silently drops.  Rounding-
/// level values certify the transform; appreciable values mean the box is
/// too small for the field.
///
/// # Safety
///
/// `field` must be a live handle, and `out` must be valid for writing one
/// double.
#[no_mangle]
pub unsafe extern "C" fn dnls_gauge_truncation_indicator(
    field: *const DnlsField,
    out: *mut f64,
) -> DnlsStatus {
    guarded(|| {
        require!(field);
        require!(out);
        // SAFETY: non-null handles are live by the caller contract.
        let inner = unsafe { &(*field).inner };
        // SAFETY: `out` is non-null and writable by the caller contract.
        unsafe { out.write(truncation_indicator(inner)) };
        DnlsStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Classification and certification
// ---------------------------------------------------------------------------

/// Places `field` relative to the variational threshold at (omega, c):
/// strictly below it and K >= 0 is K+, strictly below with K < 0 is K-,
/// anything else is above.  For K+ members the report carries the a priori
/// derivative-norm bound.  Requires soliton-bearing parameters.
///
/// # Safety
///
/// `field` must be a live handle, and `out` must be valid for writing one
/// `DnlsClassification`.
#[no_mangle]
pub unsafe extern "C" fn dnls_classify(
    field: *const DnlsField,
    omega: f64,
    c: f64,
    out: *mut DnlsClassification,
) -> DnlsStatus {
    guarded(|| {
        require!(field);
        require!(out);
        let params = try_arg!(checked_params(omega, c));
        // SAFETY: non-null handles are live by the caller contract.
        let inner = unsafe { &(*field).inner };
        let result = try_lib!(classify(inner, params, None));
        // SAFETY: `out` is non-null and writable by the caller contract.
        unsafe {
            out.write(DnlsClassification {
                j_value: result.j_value,
                k_value: result.k_value,
                j_threshold: result.j_threshold,
                set: result.set.into(),
                has_h1_bound: result.h1_bound.is_some(),
                h1_bound: result.h1_bound.unwrap_or(f64::NAN),
            })
        };
        DnlsStatus::Ok
    })
}

/// Verifies the K lower bound for a K+ member at (omega, c):
/// K >= min{4*(threshold - J), quarter of the shifted-derivative energy}.
/// Fails with `DNLS_STATUS_NOT_IN_K_PLUS` when the field is outside K+.
///
/// # Safety
///
/// `field` must be a live handle, and `out` must be valid for writing one
/// `DnlsKBound`.
#[no_mangle]
pub unsafe extern "C" fn dnls_k_lower_bound(
    field: *const DnlsField,
    omega: f64,
    c: f64,
    out: *mut DnlsKBound,
) -> DnlsStatus {
    guarded(|| {
        require!(field);
        require!(out);
        let params = try_arg!(checked_params(omega, c));
        // SAFETY: non-null handles are live by the caller contract.
        let inner = unsafe { &(*field).inner };
        let report = try_lib!(k_lower_bound(inner, params, None));
        // SAFETY: `out` is non-null and writable by the caller contract.
        unsafe {
            out.write(DnlsKBound {
                lhs: report.lhs,
                rhs: report.rhs,
                holds: report.holds,
            })
        };
        DnlsStatus::Ok
    })
}

/// Checks the mass-threshold certificate for global existence: mass below
/// 2*pi (or at it with the momentum/energy side conditions) guarantees the
/// flow stays bounded, and a ladder search produces a speed placing the
/// field in K+ at borderline parameters.
///
/// # Safety
///
/// `field` must be a live handle, and `out` must be valid for writing one
/// `DnlsCertificate`.
#[no_mangle]
pub unsafe extern "C" fn dnls_certify(
    field: *const DnlsField,
    out: *mut DnlsCertificate,
) -> DnlsStatus {
    guarded(|| {
        require!(field);
        require!(out);
        // SAFETY: non-null handles are live by the caller contract.
        let inner = unsafe { &(*field).inner };
        let certificate = certify_global(inner);
        let (kplus_omega, kplus_c) = match certificate.kplus_params {
            Some(p) => (p.omega, p.c),
            None => (f64::NAN, f64::NAN),
        };
        // SAFETY: `out` is non-null and writable by the caller contract.
        unsafe {
            out.write(DnlsCertificate {
                condition: certificate.condition_met.into(),
                has_admissible_c: certificate.admissible_c.is_some(),
                admissible_c: certificate.admissible_c.unwrap_or(f64::NAN),
                kplus_omega,
                kplus_c,
            })
        };
        DnlsStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Threshold minimization
// ---------------------------------------------------------------------------

/// Minimizes the action over the constraint manifold {K = 0} on a fresh grid
/// of `n_points` samples covering [-half_width, half_width), approximating
/// the variational threshold at (omega, c).  `summary` receives the scalar
/// outcome; `minimizer`, when non-null, receives the minimizing field as a
/// new caller-owned handle.
///
/// # Safety
///
/// `summary` must be valid for writing one `DnlsMinimizeSummary`;
/// `minimizer`, when non-null, must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn dnls_minimize_threshold(
    omega: f64,
    c: f64,
    n_points: usize,
    half_width: f64,
    summary: *mut DnlsMinimizeSummary,
    minimizer: *mut *mut DnlsField,
) -> DnlsStatus {
    guarded(|| {
        require!(summary);
        let params = try_arg!(checked_params(omega, c));
        let grid = try_lib!(GridSpec::new(n_points, half_width));
        let result = try_lib!(minimize_threshold(params, &MinimizeOptions::new(grid)));
        // SAFETY: `summary` is non-null and writable by the caller contract.
        unsafe {
            summary.write(DnlsMinimizeSummary {
                j_value: result.j_value,
                k_value: result.k_value,
                iterations: result.iterations,
                converged: result.converged,
            })
        };
        if !minimizer.is_null() {
            // SAFETY: non-null `minimizer` is writable by the caller
            // contract.
            unsafe { minimizer.write(into_handle(result.minimizer)) };
        }
        DnlsStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Time evolution
// ---------------------------------------------------------------------------

/// Advances `initial` with the integrating-factor RK4 pseudo-spectral
/// stepper: round(t_end/dt) steps of exactly `dt` under the chosen equation
/// form (`DNLS_FORM_U` or `DNLS_FORM_V`), optionally dealiasing nonlinear
/// products by the 2/3 rule.
///
/// `drift`, when non-null, receives the worst relative drift of mass,
/// momentum, and energy over every step, with the functionals evaluated at
/// (omega, c).  `final_field`, when non-null, receives the state at t_end as
/// a new caller-owned handle.
///
/// # Safety
///
/// `initial` must be a live handle; `drift` and `final_field`, when
/// non-null, must be valid for writing one `DnlsDriftSummary` and one
/// pointer respectively.
#[no_mangle]
pub unsafe extern "C" fn dnls_evolve(
    initial: *const DnlsField,
    omega: f64,
    c: f64,
    t_end: f64,
    dt: f64,
    dealias: bool,
    form: c_int,
    drift: *mut DnlsDriftSummary,
    final_field: *mut *mut DnlsField,
) -> DnlsStatus {
    guarded(|| {
        require!(initial);
        let params = try_arg!(checked_params(omega, c));
        let form = match form {
            DNLS_FORM_U => EquationForm::UForm,
            DNLS_FORM_V => EquationForm::VForm,
            other => {
                set_last_error(format!(
                    "unknown equation form {other}; use DNLS_FORM_U (0) or DNLS_FORM_V (1)"
                ));
                return DnlsStatus::InvalidArgument;
            }
        };
        let mut config = try_lib!(EvolutionConfig::new(t_end, dt));
        config.dealias = dealias;
        config.equation_form = form;
        // Keep only the endpoints; drift is tracked at every step regardless.
        config.snapshot_stride = usize::MAX;
        // SAFETY: non-null handles are live by the caller contract.
        let inner = unsafe { &(*initial).inner };
        let trace = try_lib!(evolve(inner, &config, params));
        if !drift.is_null() {
            // SAFETY: non-null `drift` is writable by the caller contract.
            unsafe {
                drift.write(DnlsDriftSummary {
                    mass: trace.max_drift.mass,
                    momentum: trace.max_drift.momentum,
                    energy: trace.max_drift.energy,
                })
            };
        }
        if !final_field.is_null() {
            let mut snapshots = trace.snapshots;
            let last = snapshots
                .pop()
                .expect("a trace records at least the initial state");
            // SAFETY: non-null `final_field` is writable by the caller
            // contract.
            unsafe { final_field.write(into_handle(last)) };
        }
        DnlsStatus::Ok
    })
}
