//! Invariant-set membership and the global-existence certificate.
//!
//! Below the soliton action level `J⁰` the phase space splits into two sets
//! that the flow cannot cross between: `K⁺ = {J < J⁰, K ≥ 0}`, on which
//! solutions stay bounded in `H¹`, and `K⁻ = {J < J⁰, K < 0}`.  This module
//! decides membership, evaluates the uniform lower bound on `K` available on
//! `K⁺`, and implements the mass-threshold certificate that promotes small
//! data to a `K⁺` classification at borderline parameters chosen
//! automatically.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::functionals::{
    action_j, energy, mass, momentum, nehari_k, shifted_derivative_sq,
};
use crate::grid::{norms, Field};
use crate::params::{Params, Regime};
use crate::soliton::soliton_mass;

/// Tolerance used for the equality clauses of the certificate (`M = 2π`,
/// `P = 0`): floating-point equality is meaningless, so the clauses accept
/// values within this distance.
pub const EQUALITY_TOL: f64 = 1e-9;

/// Slack allowed when verifying the lower-bound inequality on `K`.
pub const BOUND_SLACK: f64 = 1e-10;

/// Largest exponent of the geometric speed ladder searched by
/// [`certify_global`]: candidates are `c = 2⁰ … 2²⁰`.
const MAX_LADDER_EXPONENT: u32 = 20;

/// Which side of the threshold a field falls on, and the sign of `K` there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassSet {
    /// `J < J⁰` and `K ≥ 0`: bounded orbits.
    KPlus,
    /// `J < J⁰` and `K < 0`: the complementary invariant set.
    KMinus,
    /// `J ≥ J⁰`: outside the dichotomy (the soliton itself sits here, since
    /// both inequalities defining the sets are strict in `J`).
    AboveThreshold,
}

impl ClassSet {
    /// Stable name used in JSON output.
    pub fn name(&self) -> &'static str {
        match self {
            ClassSet::KPlus => "KPlus",
            ClassSet::KMinus => "KMinus",
            ClassSet::AboveThreshold => "AboveThreshold",
        }
    }
}

/// Verdict of [`classify`] together with the numbers it was based on.
#[derive(Debug, Clone)]
pub struct ClassificationResult {
    /// Parameters the classification is relative to.
    pub params: Params,
    /// Action `J` of the field.
    pub j_value: f64,
    /// Constraint functional `K` of the field.
    pub k_value: f64,
    /// Threshold `J⁰` the action was compared against.
    pub j_threshold: f64,
    /// Membership verdict.
    pub set: ClassSet,
    /// For `KPlus` members only: the a priori bound on `‖∂ₓu(t)‖²` that holds
    /// for as long as the solution stays in the set.
    pub h1_bound: Option<f64>,
}

/// Which clause of the mass-threshold certificate matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `M < 2π` strictly.
    MassBelow2Pi,
    /// `M = 2π` (within tolerance) and `P < 0`.
    MassEqNegMomentum,
    /// `M = 2π`, `P = 0` (within tolerance) and `E < 0`.
    MassEqZeroMomNegEnergy,
    /// No clause matched; no certificate is available.
    None,
}

impl Condition {
    /// Stable name used in JSON output.
    pub fn name(&self) -> &'static str {
        match self {
            Condition::MassBelow2Pi => "MassBelow2Pi",
            Condition::MassEqNegMomentum => "MassEqNegMomentum",
            Condition::MassEqZeroMomNegEnergy => "MassEqZeroMomNegEnergy",
            Condition::None => "None",
        }
    }
}

/// Outcome of [`certify_global`].
#[derive(Debug, Clone, Copy)]
pub struct GlobalExistenceCertificate {
    /// The certificate clause the field satisfied, if any.
    pub condition_met: Condition,
    /// A speed `c` at which the field lands in `K⁺` at borderline parameters
    /// `(c²/4, c)`, if the ladder search found one.
    pub admissible_c: Option<f64>,
    /// The borderline parameters corresponding to `admissible_c`.
    pub kplus_params: Option<Params>,
}

/// Lower-bound verification for `K` on `K⁺`: the claim is
/// `K ≥ min{4(J⁰ − J), ¼‖(∂ₓ − ic/2)f‖² + ¼(ω − c²/4)‖f‖²}`.
#[derive(Debug, Clone, Copy)]
pub struct KBoundReport {
    /// Left side: `K` itself.
    pub lhs: f64,
    /// Right side: the smaller of the two candidate bounds.
    pub rhs: f64,
    /// Whether `lhs ≥ rhs − 1e−10`.
    pub holds: bool,
}

/// Closed-form soliton action level `J⁰` for soliton-bearing parameters.
///
/// In the open region the level is `ω‖φ‖²/2 + (c/2)√(4ω − c²)` with the
/// squared norm given by [`soliton_mass`]; on the positive-speed borderline
/// the momentum and energy of the wave vanish and the level degenerates to
/// `2πω = πc²/2`.
pub fn soliton_action_level(params: Params) -> Result<f64> {
    match params.regime() {
        Regime::Subcritical => {
            let norm_sq = soliton_mass(params)?;
            Ok(0.5 * params.omega * norm_sq + 0.5 * params.c * params.discriminant().sqrt())
        }
        Regime::CriticalPositive => Ok(2.0 * PI * params.omega),
        regime => Err(Error::UnsupportedRegime {
            omega: params.omega,
            c: params.c,
            regime,
            required: crate::soliton::SOLITON_REQUIRES,
        }),
    }
}

/// Classifies a field relative to the threshold `J⁰`.
///
/// With `j_threshold = None` the closed-form soliton level is used; a caller
/// holding a variationally computed threshold may pass it explicitly.  The
/// verdict compares the action strictly: `J < J⁰` splits into `KPlus`
/// (`K ≥ 0`) and `KMinus` (`K < 0`), anything else is `AboveThreshold` — in
/// particular the soliton itself, which sits exactly at the level.
///
/// For `KPlus` members the result carries the a priori bound
/// `‖∂ₓu(t)‖² ≤ 8J⁰ − 4(ω − 2c²)·M(u₀)` valid while the flow stays in the
/// set.  Requires soliton-bearing parameters.
pub fn classify(
    f: &Field,
    params: Params,
    j_threshold: Option<f64>,
) -> Result<ClassificationResult> {
    if !params.regime().supports_soliton() {
        return Err(Error::UnsupportedRegime {
            omega: params.omega,
            c: params.c,
            regime: params.regime(),
            required: crate::soliton::SOLITON_REQUIRES,
        });
    }
    let threshold = match j_threshold {
        Some(t) => t,
        None => soliton_action_level(params)?,
    };
    let j = action_j(f, params);
    let k = nehari_k(f, params);
    let set = if j < threshold {
        if k >= 0.0 {
            ClassSet::KPlus
        } else {
            ClassSet::KMinus
        }
    } else {
        ClassSet::AboveThreshold
    };
    let h1_bound = match set {
        ClassSet::KPlus => Some(
            8.0 * threshold - 4.0 * (params.omega - 2.0 * params.c * params.c) * mass(f),
        ),
        _ => None,
    };
    Ok(ClassificationResult {
        params,
        j_value: j,
        k_value: k,
        j_threshold: threshold,
        set,
        h1_bound,
    })
}

/// Evaluates both sides of the uniform lower bound on `K` over `K⁺`.
///
/// The bound states that on `K⁺` the constraint functional cannot dip below
/// the smaller of `4(J⁰ − J)` and the manifestly nonnegative quadratic
/// `¼‖(∂ₓ − ic/2)f‖² + ¼(ω − c²/4)‖f‖²`.  Membership in `K⁺` is a
/// precondition and is re-checked via [`classify`]; fields outside the set
/// get [`Error::NotInKPlus`].
pub fn k_lower_bound(
    f: &Field,
    params: Params,
    j_threshold: Option<f64>,
) -> Result<KBoundReport> {
    let verdict = classify(f, params, j_threshold)?;
    if verdict.set != ClassSet::KPlus {
        return Err(Error::NotInKPlus {
            params,
            j: verdict.j_value,
            j_threshold: verdict.j_threshold,
            k: verdict.k_value,
        });
    }
    let lhs = verdict.k_value;
    let gap_bound = 4.0 * (verdict.j_threshold - verdict.j_value);
    let quad_bound = 0.25 * shifted_derivative_sq(f, params.c)
        + 0.25 * (params.omega - 0.25 * params.c * params.c) * norms(f).l2_sq;
    let rhs = gap_bound.min(quad_bound);
    Ok(KBoundReport {
        lhs,
        rhs,
        holds: lhs >= rhs - BOUND_SLACK,
    })
}

/// Checks the mass-threshold clauses for global existence and, when one
/// matches, searches the speed ladder `c ∈ {1, 2, 4, …, 2²⁰}` for borderline
/// parameters `(c²/4, c)` at which the field belongs to `K⁺`.
///
/// The clauses, tried in order with [`EQUALITY_TOL`] on the equalities:
/// `M < 2π`; `M = 2π` and `P < 0`; `M = 2π`, `P = 0` and `E < 0`.  The ladder
/// accepts the first `c` with `J_{c²/4,c} < πc²/2` and `K_{c²/4,c} > 0`; the
/// action comparison is evaluated in the cancellation-free difference form
/// `E + cP + (c²/4)(M − 2π) < 0`, exact even when both sides are huge.  A
/// matched clause with an exhausted ladder returns the condition with no
/// admissible speed; an unmatched field returns `Condition::None`.
pub fn certify_global(f: &Field) -> GlobalExistenceCertificate {
    let m = mass(f);
    let p = momentum(f);
    let e = energy(f);
    let two_pi = 2.0 * PI;

    let condition = if m < two_pi {
        Condition::MassBelow2Pi
    } else if (m - two_pi).abs() <= EQUALITY_TOL && p < 0.0 {
        Condition::MassEqNegMomentum
    } else if (m - two_pi).abs() <= EQUALITY_TOL && p.abs() <= EQUALITY_TOL && e < 0.0 {
        Condition::MassEqZeroMomNegEnergy
    } else {
        Condition::None
    };
    if condition == Condition::None {
        return GlobalExistenceCertificate {
            condition_met: Condition::None,
            admissible_c: None,
            kplus_params: None,
        };
    }

    let mass_defect = m - two_pi;
    for exponent in 0..=MAX_LADDER_EXPONENT {
        let c = f64::from(1u32 << exponent);
        let action_gap = e + c * p + 0.25 * c * c * mass_defect;
        if action_gap >= 0.0 {
            continue;
        }
        let candidate = Params::new(0.25 * c * c, c);
        if nehari_k(f, candidate) > 0.0 {
            return GlobalExistenceCertificate {
                condition_met: condition,
                admissible_c: Some(c),
                kplus_params: Some(candidate),
            };
        }
    }
    GlobalExistenceCertificate {
        condition_met: condition,
        admissible_c: None,
        kplus_params: None,
    }
}
