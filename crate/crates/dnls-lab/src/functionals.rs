//! The conserved quantities and variational functionals.
//!
//! For a field f on the periodic grid, with Df the spectral derivative:
//!
//! ```text
//! M(f) = ½∫|f|²                                     (mass)
//! P(f) = −½∫Im(f̄·Df) + (1/8)∫|f|⁴                  (momentum)
//! E(f) = ½∫|Df|² − (1/32)∫|f|⁶                      (energy)
//! J(f) = E + ωM + cP                                 (action)
//! K(f) = ∫(|Df|² + ω|f|² − c·Im(f̄·Df) + (c/2)|f|⁴ − (3/16)|f|⁶)
//! ```
//!
//! K splits into a quadratic-dominated part KQ and a nonlinear part KN with
//! K = KQ − KN; the split depends on the regime:
//!
//! - subcritical: KQ = ∫(|Df|² + ω|f|² − c·Im(f̄·Df)),
//!   KN = (3/16)∫|f|⁶ − (c/2)∫|f|⁴;
//! - critical:    KQ = ∫(|Df|² + ω|f|² − c·Im(f̄·Df) + (c/2)|f|⁴),
//!   KN = (3/16)∫|f|⁶.
//!
//! The completed-square identity
//! ∫|Df − i(c/2)f|² = ∫|Df|² − c∫Im(f̄·Df) + (c²/4)∫|f|²
//! turns the quadratic part into the manifestly nonnegative
//! KQ_sub = ∫|Df − i(c/2)f|² + (ω − c²/4)∫|f|², and gives H = J − K/4
//! (subcritical) and H = J − K/6 (critical) the nonnegative closed forms
//!
//! ```text
//! H_sub  = ¼∫|Df − i(c/2)f|² + ¼(ω − c²/4)∫|f|² + (1/64)∫|f|⁶
//! H_crit = ⅓∫|Df − i(c/2)f|² + (c/24)∫|f|⁴
//! ```
//!
//! [`positive_h`] evaluates those closed forms directly — so H ≥ 0 holds
//! exactly, not just up to cancellation error — and the J − K/4 (or /6)
//! relation is an accuracy check rather than the definition.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{spectral_derivative, Field};
use crate::params::{Params, Regime};

const SPLIT_REQUIRES: &str =
    "4*omega > c^2 (subcritical) or 4*omega = c^2 with c > 0 (critical), \
     where the constraint splitting K = KQ - KN is defined";

/// The integral building blocks every functional is assembled from,
/// computed in one pass over the samples plus one spectral derivative.
#[derive(Debug, Clone, Copy)]
struct Moments {
    /// ∫|f|².
    l2: f64,
    /// ∫|f|⁴.
    l4: f64,
    /// ∫|f|⁶.
    l6: f64,
    /// ∫|Df|².
    dsq: f64,
    /// ∫Im(f̄·Df).
    imbar: f64,
    /// ∫|Df − i(c/2)f|² (the phase-shifted derivative).
    shifted_dsq: f64,
}

fn moments(f: &Field, c: f64) -> Moments {
    let df = spectral_derivative(f);
    let h = f.grid.spacing;
    let half_c = c / 2.0;
    let (mut l2, mut l4, mut l6, mut dsq, mut imbar, mut shifted) =
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for (v, dv) in f.values.iter().zip(&df.values) {
        let a2 = v.norm_sqr();
        l2 += a2;
        l4 += a2 * a2;
        l6 += a2 * a2 * a2;
        dsq += dv.norm_sqr();
        imbar += (v.conj() * dv).im;
        let s = dv - Complex64::new(0.0, half_c) * v;
        shifted += s.norm_sqr();
    }
    Moments {
        l2: l2 * h,
        l4: l4 * h,
        l6: l6 * h,
        dsq: dsq * h,
        imbar: imbar * h,
        shifted_dsq: shifted * h,
    }
}

/// Mass M = ½∫|f|².
pub fn mass(f: &Field) -> f64 {
    let h = f.grid.spacing;
    let mut l2 = 0.0;
    for v in &f.values {
        l2 += v.norm_sqr();
    }
    0.5 * l2 * h
}

/// Momentum P = −½∫Im(f̄·Df) + (1/8)∫|f|⁴.
pub fn momentum(f: &Field) -> f64 {
    let m = moments(f, 0.0);
    -0.5 * m.imbar + m.l4 / 8.0
}

/// Mass, momentum and energy in one pass — the conservation monitor of the
/// time integrator calls this every step, where three separate evaluations
/// would triple the transform work.
pub(crate) fn conserved_triple(f: &Field) -> (f64, f64, f64) {
    let m = moments(f, 0.0);
    let mass = 0.5 * m.l2;
    let momentum = -0.5 * m.imbar + m.l4 / 8.0;
    let energy = 0.5 * m.dsq - m.l6 / 32.0;
    (mass, momentum, energy)
}

/// Energy E = ½∫|Df|² − (1/32)∫|f|⁶.
pub fn energy(f: &Field) -> f64 {
    let m = moments(f, 0.0);
    0.5 * m.dsq - m.l6 / 32.0
}

/// Action J = E + ωM + cP.
pub fn action_j(f: &Field, params: Params) -> f64 {
    let m = moments(f, 0.0);
    action_from_moments(&m, params)
}

fn action_from_moments(m: &Moments, params: Params) -> f64 {
    let e = 0.5 * m.dsq - m.l6 / 32.0;
    let mass = 0.5 * m.l2;
    let p = -0.5 * m.imbar + m.l4 / 8.0;
    e + params.omega * mass + params.c * p
}

/// Action evaluated from the expanded integrand
/// ∫(½|Df|² − (1/32)|f|⁶ + (ω/2)|f|² − (c/2)Im(f̄·Df) + (c/8)|f|⁴) —
/// an algebraic rearrangement of [`action_j`] used as a cross-check.
pub fn action_j_expanded(f: &Field, params: Params) -> f64 {
    let m = moments(f, 0.0);
    0.5 * m.dsq - m.l6 / 32.0 + 0.5 * params.omega * m.l2
        - 0.5 * params.c * m.imbar
        + params.c / 8.0 * m.l4
}

/// Constraint functional
/// K = ∫(|Df|² + ω|f|² − c·Im(f̄·Df) + (c/2)|f|⁴ − (3/16)|f|⁶).
///
/// Defined — and an invariant of the flow through the stationary equation —
/// in every regime; only its KQ/KN split is regime-dependent.
pub fn nehari_k(f: &Field, params: Params) -> f64 {
    let m = moments(f, 0.0);
    nehari_from_moments(&m, params)
}

fn nehari_from_moments(m: &Moments, params: Params) -> f64 {
    m.dsq + params.omega * m.l2 - params.c * m.imbar + params.c / 2.0 * m.l4
        - 3.0 / 16.0 * m.l6
}

/// The constraint functional together with its regime-dependent split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NehariSplit {
    /// K = KQ − KN.
    pub k: f64,
    /// Quadratic-dominated part KQ (nonnegative in admissible regimes).
    pub kq: f64,
    /// Nonlinear part KN.
    pub kn: f64,
}

/// K with its KQ/KN split. Errors in regimes where the split is undefined
/// (use [`nehari_k`] there; K itself always exists).
pub fn nehari_split(f: &Field, params: Params) -> Result<NehariSplit> {
    let m = moments(f, 0.0);
    split_from_moments(&m, params)
}

fn split_from_moments(m: &Moments, params: Params) -> Result<NehariSplit> {
    let quad = m.dsq + params.omega * m.l2 - params.c * m.imbar;
    let (kq, kn) = match params.regime() {
        Regime::Subcritical => (quad, 3.0 / 16.0 * m.l6 - params.c / 2.0 * m.l4),
        Regime::CriticalPositive => {
            (quad + params.c / 2.0 * m.l4, 3.0 / 16.0 * m.l6)
        }
        regime => {
            return Err(Error::UnsupportedRegime {
                omega: params.omega,
                c: params.c,
                regime,
                required: SPLIT_REQUIRES,
            })
        }
    };
    Ok(NehariSplit {
        k: nehari_from_moments(m, params),
        kq,
        kn,
    })
}

/// The nonnegative functional H = J − K/4 (subcritical) or J − K/6
/// (critical), evaluated through its manifestly nonnegative closed form so
/// the result is ≥ 0 exactly:
///
/// - subcritical: ¼∫|Df − i(c/2)f|² + ¼(ω−c²/4)∫|f|² + (1/64)∫|f|⁶
/// - critical:    ⅓∫|Df − i(c/2)f|² + (c/24)∫|f|⁴
pub fn positive_h(f: &Field, params: Params) -> Result<f64> {
    let m = moments(f, params.c);
    positive_h_from_moments(&m, params)
}

fn positive_h_from_moments(m: &Moments, params: Params) -> Result<f64> {
    match params.regime() {
        Regime::Subcritical => {
            let sigma = params.omega - params.c * params.c / 4.0;
            Ok(0.25 * m.shifted_dsq + 0.25 * sigma * m.l2 + m.l6 / 64.0)
        }
        Regime::CriticalPositive => {
            Ok(m.shifted_dsq / 3.0 + params.c / 24.0 * m.l4)
        }
        regime => Err(Error::UnsupportedRegime {
            omega: params.omega,
            c: params.c,
            regime,
            required: SPLIT_REQUIRES,
        }),
    }
}

/// ∫|Df − i(c/2)f|², the phase-shifted derivative energy. This is the
/// quantity behind the completed-square identity
/// KQ_sub = ∫|Df − i(c/2)f|² + (ω − c²/4)∫|f|², and doubles as the Ḣ¹ part
/// of the structure-space diagnostics.
pub fn shifted_derivative_sq(f: &Field, c: f64) -> f64 {
    moments(f, c).shifted_dsq
}

/// Every functional of a field at given parameters, plus the regime.
///
/// Field names are the serialization contract: the JSON written by the CLI
/// uses exactly these keys.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalReport {
    /// Mass M.
    pub mass: f64,
    /// Momentum P.
    pub momentum: f64,
    /// Energy E.
    pub energy: f64,
    /// Action J = E + ωM + cP.
    pub action: f64,
    /// Constraint functional K.
    pub nehari: f64,
    /// Quadratic-dominated part KQ of the split K = KQ − KN.
    pub quadratic_part: f64,
    /// Nonlinear part KN of the split.
    pub nonlinear_part: f64,
    /// The nonnegative functional H.
    pub positive_part: f64,
    /// Parameters the J/K/H entries were evaluated at.
    pub params: Params,
    /// Regime of those parameters.
    pub regime: Regime,
}

impl FunctionalReport {
    /// Evaluate every functional of `f` at `params`.
    ///
    /// Requires a regime where the KQ/KN split and H are defined
    /// (subcritical, or critical with c > 0); errors otherwise.
    pub fn evaluate(f: &Field, params: Params) -> Result<FunctionalReport> {
        let m = moments(f, params.c);
        let split = split_from_moments(&m, params)?;
        let h = positive_h_from_moments(&m, params)?;
        Ok(FunctionalReport {
            mass: 0.5 * m.l2,
            momentum: -0.5 * m.imbar + m.l4 / 8.0,
            energy: 0.5 * m.dsq - m.l6 / 32.0,
            action: action_from_moments(&m, params),
            nehari: split.k,
            quadratic_part: split.kq,
            nonlinear_part: split.kn,
            positive_part: h,
            params,
            regime: params.regime(),
        })
    }
}
