//! Error type shared across the crate.
//!
//! Domain errors (unsupported parameter regimes, failed root brackets, …) are
//! kept distinct from I/O and format errors so that callers — the CLI in
//! particular — can map them to different exit codes.

use crate::params::{Params, Regime};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the laboratory.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The parameter pair lies outside the regime an operation is defined on.
    /// Solitary waves exist only for 4ω > c² and for 4ω = c² with c > 0.
    #[error(
        "(omega, c) = ({omega}, {c}) falls in the {regime:?} regime; \
         this operation requires {required}"
    )]
    UnsupportedRegime {
        /// Frequency parameter ω of the attempted operation.
        omega: f64,
        /// Speed parameter c of the attempted operation.
        c: f64,
        /// The regime that (ω, c) actually falls into.
        regime: Regime,
        /// What the operation needs, spelled out for the error message.
        required: &'static str,
    },

    /// The constraint function never changes sign on the searched interval.
    #[error(
        "no constraint root in (0, 1]: K({lambda_lo}*f) = {k_lo} and K(f) = {k_hi} \
         do not bracket a sign change"
    )]
    NoRoot {
        /// Smallest scaling factor probed.
        lambda_lo: f64,
        /// K at the smallest probed scaling.
        k_lo: f64,
        /// K at λ = 1.
        k_hi: f64,
    },

    /// An operation that requires a real-valued field received a complex one.
    #[error(
        "field has a non-real sample at index {index}: imaginary part {imag:e} \
         exceeds {tol:e}"
    )]
    ComplexInput {
        /// Index of the offending sample.
        index: usize,
        /// Its imaginary part.
        imag: f64,
        /// The tolerance it violated.
        tol: f64,
    },

    /// A bound that is only defined on the K⁺ invariant set was requested for
    /// data outside it.
    #[error(
        "field is not in the K+ set at (omega, c) = ({}, {}): J = {j} vs threshold {j_threshold}, K = {k}",
        params.omega, params.c
    )]
    NotInKPlus {
        /// Parameters of the classification.
        params: Params,
        /// Action value of the field.
        j: f64,
        /// Threshold it must stay below.
        j_threshold: f64,
        /// Constraint value of the field.
        k: f64,
    },

    /// Time stepping produced a non-finite sample.
    #[error(
        "evolution produced a non-finite value at t = {t} (step {step}); \
         the last finite snapshot was retained"
    )]
    NonFinite {
        /// Time at which the first non-finite sample appeared.
        t: f64,
        /// Step index at which it appeared.
        step: usize,
        /// The state one step before the breakdown, when available, so that a
        /// blow-up candidate can still be inspected.
        last_finite: Option<Box<crate::grid::Field>>,
    },

    /// Mismatched grids, non-finite samples, or otherwise malformed inputs.
    #[error("invalid field: {reason}")]
    InvalidField {
        /// Human-readable description of the violation.
        reason: String,
    },

    /// A file could not be parsed in the expected format.
    #[error("format error in {path}: {reason}")]
    Format {
        /// Path of the offending file.
        path: String,
        /// What went wrong.
        reason: String,
    },

    /// Underlying file-system failure.
    #[error("i/o error on {path}: {source}")]
    Io {
        /// Path of the offending file.
        path: String,
        /// The OS-level error.
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors that indicate a malformed request or impossible
    /// mathematical operation (CLI exit code 1), as opposed to I/O or file
    /// format failures (CLI exit code 2).
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::Io { .. } | Error::Format { .. })
    }
}
