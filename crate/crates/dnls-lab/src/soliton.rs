//! The two-parameter solitary-wave family and its stationary-equation
//! residuals.
//!
//! For 4ω > c² (subcritical) the equation has the exponentially localized
//! profile
//!
//! ```text
//! ϕ_{ω,c}(x) = [ √ω/(4ω−c²) · (cosh(√(4ω−c²)·x) − c/(2√ω)) ]^{−1/2},
//! ```
//!
//! and on the borderline 4ω = c² with c > 0 the algebraically decaying
//!
//! ```text
//! ϕ_{ω,c}(x) = 2√c · (c²x² + 1)^{−1/2}.
//! ```
//!
//! The full complex wave carries the fixed phase slope c/2:
//! varphi(x) = e^{iθ₀} e^{i(c/2)(x−x₀)} ϕ_{ω,c}(x−x₀), and
//! u(t, x) = e^{iωt} varphi(x − ct) solves the time-dependent equation.
//!
//! Two stationary residuals are provided. Writing f′ for the spectral
//! derivative and f″ for the spectral second derivative:
//!
//! - semilinear form:   ωf − f″ − (3/16)|f|⁴f + icf′ + (c/2)|f|²f
//! - quasilinear form:  ωf − f″ − (3/16)|f|⁴f + icf′ − (i/2)|f|²f′ + (i/2)f²(f̄)′
//!
//! Both vanish on the exact waves; on fields with the e^{i(c/2)x}·(real)
//! structure the two nonlinearities agree pointwise, which is the discrete
//! face of the equivalence between the two equation forms.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{
    quadrature_re, second_derivative, spectral_derivative, Field, GridSpec,
};
use crate::params::{Params, Regime};

pub(crate) const SOLITON_REQUIRES: &str =
    "4*omega > c^2 (subcritical) or 4*omega = c^2 with c > 0 (critical), \
     where solitary waves exist";
const MASS_FORMULA_REQUIRES: &str =
    "the subcritical regime 4*omega > c^2 (domain of the closed-form mass)";

/// A solitary wave: parameters plus the free phase and translation.
///
/// Invariant: `params` lies in a soliton-supporting regime (subcritical, or
/// critical with c > 0). The constructors enforce this; the sampling
/// functions re-check it so hand-built values cannot bypass the invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonSpec {
    /// Frequency and speed (ω, c).
    pub params: Params,
    /// Global phase θ₀ in radians.
    pub phase_shift: f64,
    /// Center position x₀.
    pub translation: f64,
}

impl SolitonSpec {
    /// A solitary wave with the given phase and translation.
    pub fn new(params: Params, phase_shift: f64, translation: f64) -> Result<Self> {
        require_soliton_regime(params)?;
        Ok(SolitonSpec {
            params,
            phase_shift,
            translation,
        })
    }

    /// The canonical representative: θ₀ = 0, x₀ = 0.
    pub fn centered(params: Params) -> Result<Self> {
        SolitonSpec::new(params, 0.0, 0.0)
    }
}

fn require_soliton_regime(params: Params) -> Result<()> {
    let regime = params.regime();
    if regime.supports_soliton() {
        Ok(())
    } else {
        Err(Error::UnsupportedRegime {
            omega: params.omega,
            c: params.c,
            regime,
            required: SOLITON_REQUIRES,
        })
    }
}

/// Value of the real profile ϕ_{ω,c} at offset y from its center.
///
/// For large |y| the subcritical cosh overflows to +∞ and the expression
/// cleanly underflows to 0, which is the correct tail value.
fn profile_value(params: Params, regime: Regime, y: f64) -> f64 {
    let (omega, c) = (params.omega, params.c);
    match regime {
        Regime::Subcritical => {
            let s = params.discriminant().sqrt();
            let sqrt_omega = omega.sqrt();
            let denom = sqrt_omega * ((s * y).cosh() - c / (2.0 * sqrt_omega));
            (s * s / denom).sqrt()
        }
        Regime::CriticalPositive => 2.0 * c.sqrt() / (c * c * y * y + 1.0).sqrt(),
        _ => unreachable!("callers validate the regime first"),
    }
}

/// Sample the real positive profile ϕ_{ω,c}(x − x₀) on the grid.
pub fn phi_profile(spec: &SolitonSpec, grid: &Arc<GridSpec>) -> Result<Field> {
    require_soliton_regime(spec.params)?;
    let regime = spec.params.regime();
    Field::from_fn(grid, |x| {
        Complex64::new(
            profile_value(spec.params, regime, x - spec.translation),
            0.0,
        )
    })
}

/// Sample the full complex wave e^{iθ₀} e^{i(c/2)(x−x₀)} ϕ_{ω,c}(x−x₀).
pub fn varphi_profile(spec: &SolitonSpec, grid: &Arc<GridSpec>) -> Result<Field> {
    require_soliton_regime(spec.params)?;
    let regime = spec.params.regime();
    let half_c = spec.params.c / 2.0;
    Field::from_fn(grid, |x| {
        let y = x - spec.translation;
        let phase = Complex64::new(0.0, spec.phase_shift + half_c * y).exp();
        phase * profile_value(spec.params, regime, y)
    })
}

/// Sample the exact solution at time t:
/// u(t, x) = e^{iωt} e^{iθ₀} e^{i(c/2)(x−x₀−ct)} ϕ_{ω,c}(x−x₀−ct).
///
/// Callers should keep |c·t| well below the half-width; once the wave runs
/// into the periodic seam it wraps around, which is faithful to the discrete
/// dynamics but no longer compares against the line soliton.
pub fn traveling_wave(spec: &SolitonSpec, grid: &Arc<GridSpec>, t: f64) -> Result<Field> {
    require_soliton_regime(spec.params)?;
    let regime = spec.params.regime();
    let half_c = spec.params.c / 2.0;
    let center = spec.translation + spec.params.c * t;
    let global = spec.phase_shift + spec.params.omega * t;
    Field::from_fn(grid, |x| {
        let y = x - center;
        let phase = Complex64::new(0.0, global + half_c * y).exp();
        phase * profile_value(spec.params, regime, y)
    })
}

/// Exact squared L² norm of the subcritical wave:
/// ‖φ_{ω,c}‖² = 8·arctan(√((2√ω + c)/(2√ω − c))).
///
/// Only defined in the subcritical regime; the critical-regime norm (the
/// 4π limit) is not covered by this formula and is rejected.
pub fn soliton_mass(params: Params) -> Result<f64> {
    if params.regime() != Regime::Subcritical {
        return Err(Error::UnsupportedRegime {
            omega: params.omega,
            c: params.c,
            regime: params.regime(),
            required: MASS_FORMULA_REQUIRES,
        });
    }
    let two_sqrt_omega = 2.0 * params.omega.sqrt();
    let ratio = (two_sqrt_omega + params.c) / (two_sqrt_omega - params.c);
    Ok(8.0 * ratio.sqrt().atan())
}

/// Discrete L² norm of the semilinear stationary residual
/// ωf − f″ − (3/16)|f|⁴f + icf′ + (c/2)|f|²f.
pub fn residual_semilinear(f: &Field, params: Params) -> f64 {
    let df = spectral_derivative(f);
    let d2f = second_derivative(f);
    let (omega, c) = (params.omega, params.c);
    let i = Complex64::new(0.0, 1.0);
    residual_norm(f, |j, v| {
        let a2 = v.norm_sqr();
        omega * v - d2f.values[j] - (3.0 / 16.0) * a2 * a2 * v
            + i * c * df.values[j]
            + (c / 2.0) * a2 * v
    })
}

/// Discrete L² norm of the quasilinear stationary residual
/// ωf − f″ − (3/16)|f|⁴f + icf′ − (i/2)|f|²f′ + (i/2)f²(f̄)′.
///
/// The conjugate derivative (f̄)′ is computed as conj(f′): the spectral
/// differentiation matrix is real, so the two agree to roundoff.
pub fn residual_quasilinear(f: &Field, params: Params) -> f64 {
    let df = spectral_derivative(f);
    let d2f = second_derivative(f);
    let (omega, c) = (params.omega, params.c);
    let i = Complex64::new(0.0, 1.0);
    residual_norm(f, |j, v| {
        let a2 = v.norm_sqr();
        let dv = df.values[j];
        omega * v - d2f.values[j] - (3.0 / 16.0) * a2 * a2 * v + i * c * dv
            - 0.5 * i * a2 * dv
            + 0.5 * i * v * v * dv.conj()
    })
}

fn residual_norm(f: &Field, term: impl Fn(usize, Complex64) -> Complex64) -> f64 {
    let sq = Field {
        grid: Arc::clone(&f.grid),
        values: f
            .values
            .iter()
            .enumerate()
            .map(|(j, &v)| Complex64::new(term(j, v).norm_sqr(), 0.0))
            .collect(),
    };
    quadrature_re(&sq).sqrt()
}
