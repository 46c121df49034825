//! Traveling-wave parameters (ω, c) and their regime classification.
//!
//! The solitary-wave family is indexed by a frequency ω and a speed c. The
//! sign of 4ω − c² decides everything: localized profiles exist for
//! 4ω > c² (subcritical) and on the borderline 4ω = c² only when c > 0.

/// Position of (ω, c) relative to the existence boundary 4ω = c².
///
/// The comparison is exact floating-point comparison: the borderline is a
/// measure-zero set that callers hit only by constructing c = 2√ω
/// deliberately (e.g. (ω, c) = (1, 2)), and rounding those parameters is
/// exactly what a caller probing the borderline does not want.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// 4ω > c²: exponentially localized solitary waves exist.
    Subcritical,
    /// 4ω = c², c > 0: an algebraically decaying solitary wave exists.
    CriticalPositive,
    /// 4ω = c², c ≤ 0: no solitary wave.
    CriticalNonpositive,
    /// 4ω < c²: no solitary wave.
    Supercritical,
}

impl Regime {
    /// Regimes in which a solitary wave exists.
    pub fn supports_soliton(self) -> bool {
        matches!(self, Regime::Subcritical | Regime::CriticalPositive)
    }

    /// Stable name used in JSON output.
    pub fn name(self) -> &'static str {
        match self {
            Regime::Subcritical => "Subcritical",
            Regime::CriticalPositive => "CriticalPositive",
            Regime::CriticalNonpositive => "CriticalNonpositive",
            Regime::Supercritical => "Supercritical",
        }
    }
}

/// Traveling-wave parameter pair (ω, c).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// Frequency ω of the phase rotation e^{iωt}.
    pub omega: f64,
    /// Propagation speed c.
    pub c: f64,
}

impl Params {
    /// Bundle a frequency and a speed.
    pub fn new(omega: f64, c: f64) -> Self {
        Params { omega, c }
    }

    /// The discriminant 4ω − c² deciding the regime.
    pub fn discriminant(&self) -> f64 {
        4.0 * self.omega - self.c * self.c
    }

    /// Classify (ω, c) relative to the existence boundary.
    pub fn regime(&self) -> Regime {
        let d = self.discriminant();
        if d > 0.0 {
            Regime::Subcritical
        } else if d == 0.0 {
            if self.c > 0.0 {
                Regime::CriticalPositive
            } else {
                Regime::CriticalNonpositive
            }
        } else {
            Regime::Supercritical
        }
    }
}
