//! Gauge transformations linking the two equation forms.
//!
//! The two evolution equations handled by this crate are related by the
//! family of gauge transformations
//!
//! ```text
//! G_a(v)(x) = exp( i·a · ∫_{-∞}^{x} |v(η)|² dη ) · v(x),
//! ```
//!
//! which multiply the field by a unimodular phase built from the running mass
//! integral.  With `a = 3/4` the transformation carries a solution of the
//! divergence form `i∂ₜv + ∂ₓ²v + i∂ₓ(|v|²v) = 0` to a solution of the form
//! used throughout this crate, and `a = -3/4` inverts it.
//!
//! On the periodic grid the lower limit `-∞` is truncated to the left edge
//! `x = -L`; the phase error committed by that truncation is bounded by the
//! mass carried beyond the box, for which the left-edge density
//! [`truncation_indicator`] is the observable proxy.  For fields that decay
//! within the box the indicator is at rounding level and the transformation
//! is exact to machine precision.

use num_complex::Complex64;

use crate::grid::{cumulative_integral, Field};

/// Gauge coefficient carrying the divergence form to this crate's form.
pub const TO_U_COEFFICIENT: f64 = 0.75;

/// Applies the gauge transformation `G_a` to a field.
///
/// The running integral of `|v|²` is taken from the left edge of the grid by
/// the spectral antiderivative [`cumulative_integral`], and the field is
/// multiplied pointwise by `exp(i·a·∫|v|²)`.  The modulus is preserved
/// pointwise, hence so are the mass and every other functional of `|v|`
/// alone.  `G_0` is the identity, and `G_a ∘ G_b = G_{a+b}` because the
/// transformation never changes the densities entering the phase.
pub fn gauge_transform(v: &Field, a: f64) -> Field {
    let density = v.map(|val| Complex64::new(val.norm_sqr(), 0.0));
    let running = cumulative_integral(&density);
    let twisted: Vec<Complex64> = v
        .values
        .iter()
        .zip(running.values.iter())
        .map(|(val, acc)| Complex64::from_polar(1.0, a * acc.re) * val)
        .collect();
    Field::from_values(&v.grid, twisted).expect("unimodular phase keeps samples finite")
}

/// Carries a solution of the divergence form to this crate's equation form
/// (`G_{3/4}`).
pub fn to_u_form(v: &Field) -> Field {
    gauge_transform(v, TO_U_COEFFICIENT)
}

/// Carries a solution of this crate's equation form back to the divergence
/// form (`G_{-3/4}`).
pub fn to_v_form(u: &Field) -> Field {
    gauge_transform(u, -TO_U_COEFFICIENT)
}

/// Mass density at the left edge of the grid, `|v(-L)|²`.
///
/// The gauge phase integrates `|v|²` from the left edge rather than from
/// `-∞`; the neglected tail mass is the truncation error of that phase, and
/// the edge density is the measurable indicator of how much mass still lives
/// there.  Values at rounding level certify that the transformation is exact
/// for practical purposes; appreciable values mean the box is too small for
/// the field.
pub fn truncation_indicator(v: &Field) -> f64 {
    v.values[0].norm_sqr()
}
