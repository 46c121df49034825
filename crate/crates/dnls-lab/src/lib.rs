//! # dnls-lab
//!
//! A numerical laboratory for the derivative nonlinear Schrödinger equation
//! on a periodic box, written around the gauge-equivalent form
//!
//! ```text
//! i ∂_t u + ∂²_x u + (i/2)|u|² ∂_x u − (i/2) u² ∂_x ū + (3/16)|u|⁴ u = 0
//! ```
//!
//! whose solitary waves u(t, x) = e^{iωt} e^{i(c/2)(x−ct)} ϕ_{ω,c}(x−ct) are
//! known in closed form, and the standard form
//!
//! ```text
//! i ∂_t v + ∂²_x v + i ∂_x(|v|² v) = 0
//! ```
//!
//! reachable through the gauge map [`gauge::gauge_transform`].
//!
//! The crate provides:
//!
//! - [`grid`]: periodic grids, sampled fields, spectral derivatives,
//!   quadrature, and cumulative integrals;
//! - [`soliton`]: the two-parameter solitary-wave family ϕ_{ω,c}, its exact
//!   squared L² norm, and stationary-equation residuals;
//! - [`functionals`]: mass, momentum, energy, the action J = E + ωM + cP,
//!   and the constraint functional K with its quadratic/nonlinear split;
//! - [`gauge`]: the gauge transformation between the two equation forms;
//! - [`variational`]: constrained rescaling onto {K = 0}, symmetric
//!   decreasing rearrangement, and minimization of the variational threshold;
//! - [`classify`]: membership in the invariant sets below the threshold and
//!   global-existence certificates;
//! - [`evolve`]: an integrating-factor RK4 pseudo-spectral evolver with
//!   conserved-quantity drift tracking;
//! - [`fieldcsv`] / [`jsonio`] / [`trace`]: deterministic file formats used
//!   by the `dnls-lab` command-line tool.
//!
//! ## Example
//!
//! ```
//! use dnls_lab::grid::GridSpec;
//! use dnls_lab::params::Params;
//! use dnls_lab::soliton::{varphi_profile, SolitonSpec};
//! use dnls_lab::functionals::FunctionalReport;
//!
//! let grid = GridSpec::default_grid();
//! let params = Params::new(1.0, 1.0);
//! let spec = SolitonSpec::centered(params).unwrap();
//! let wave = varphi_profile(&spec, &grid).unwrap();
//! let report = FunctionalReport::evaluate(&wave, params).unwrap();
//! // The wave sits on the constraint manifold: K ≈ 0.
//! assert!(report.nehari.abs() < 1e-6);
//! ```

pub mod classify;
pub mod error;
pub mod evolve;
pub mod fieldcsv;
pub mod functionals;
pub mod gauge;
pub mod grid;
pub mod jsonio;
pub mod params;
pub mod soliton;
pub mod trace;
pub mod variational;

pub use error::{Error, Result};
pub use grid::{Field, GridSpec, Norms};
pub use num_complex::Complex64;
pub use params::{Params, Regime};
