//! Periodic grid, sampled fields, and spectral calculus.
//!
//! Everything in this crate lives on a uniform periodic grid over [−L, L):
//! N equispaced points x_j = −L + j·h, h = 2L/N, with the right endpoint
//! identified with the left. Derivatives are spectral (FFT-based) with the
//! standard wavenumbers k_j = πj/L in FFT ordering; integrals are the
//! trapezoidal rule, which on a periodic grid collapses to the rectangle sum
//! h·Σf(x_j) and is spectrally accurate for smooth periodic integrands.
//!
//! Conventions fixed here and relied on everywhere else:
//!
//! - first derivative: multiply by ik_j, with the Nyquist mode zeroed
//!   (its derivative is pure imaginary noise for real data);
//! - second derivative: multiply by −k_j², Nyquist kept;
//! - quadrature: h·Σ over samples in index order (a fixed summation order
//!   keeps results bit-reproducible across runs);
//! - cumulative integral: spectral antiderivative anchored at the left
//!   edge, F(x_0) = 0 — an exact ramp for the mean plus 1/(ik) for the
//!   oscillating remainder.

use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Default number of grid points used by the command-line tools.
pub const DEFAULT_N_POINTS: usize = 4096;
/// Default half-width L of the periodic box [−L, L).
pub const DEFAULT_HALF_WIDTH: f64 = 40.0;

/// A uniform periodic grid on [−half_width, half_width).
///
/// Construct via [`GridSpec::new`]; the constructor enforces that `n_points`
/// is a power of two (the FFT sizes we plan for) and at least 8, and that the
/// half-width is positive and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// Number of samples N (a power of two).
    pub n_points: usize,
    /// Half-width L of the box [−L, L).
    pub half_width: f64,
    /// Grid spacing h = 2L/N.
    pub spacing: f64,
    /// Wavenumbers k_j = πj/L in standard FFT ordering:
    /// j = 0, 1, …, N/2−1, −N/2, …, −1.
    pub wavenumbers: Vec<f64>,
}

impl GridSpec {
    /// Build a grid with `n_points` samples on [−half_width, half_width).
    pub fn new(n_points: usize, half_width: f64) -> Result<Arc<GridSpec>> {
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(Error::InvalidField {
                reason: format!(
                    "n_points must be a power of two >= 8, got {n_points}"
                ),
            });
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidField {
                reason: format!("half_width must be positive and finite, got {half_width}"),
            });
        }
        let spacing = 2.0 * half_width / n_points as f64;
        let base = std::f64::consts::PI / half_width;
        let n = n_points as i64;
        let wavenumbers = (0..n)
            .map(|j| {
                let signed = if j < n / 2 { j } else { j - n };
                base * signed as f64
            })
            .collect();
        Ok(Arc::new(GridSpec {
            n_points,
            half_width,
            spacing,
            wavenumbers,
        }))
    }

    /// The default grid: N = 4096 points on [−40, 40).
    pub fn default_grid() -> Arc<GridSpec> {
        GridSpec::new(DEFAULT_N_POINTS, DEFAULT_HALF_WIDTH)
            .expect("default grid parameters are valid")
    }

    /// The j-th sample position x_j = −L + j·h.
    ///
    /// Evaluated as 2L·(j − N/2)/N: the ratio is exact in floating point
    /// (its denominator is a power of two), so each position carries a
    /// single rounding whose absolute size scales with |x_j| rather than
    /// with L. That keeps samples near the origin exact — where profiles
    /// have O(1) slope, a position staircase of size ulp(L) would turn
    /// into sample noise that the k²-weighted second derivative amplifies
    /// into a visible equation residual — while the left edge stays
    /// exactly −L and the centre exactly 0.
    pub fn x(&self, j: usize) -> f64 {
        let n = self.n_points as i64;
        let offset = (j as i64 - n / 2) as f64 / n as f64;
        2.0 * self.half_width * offset
    }

    /// All sample positions in index order.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.x(j))
    }

    /// True if `other` describes the same sample layout.
    pub fn same_layout(&self, other: &GridSpec) -> bool {
        self.n_points == other.n_points && self.half_width == other.half_width
    }

    /// Two-thirds-rule dealiasing mask in FFT ordering: `true` for modes with
    /// |j_signed| ≤ N/3, `false` for the aliasing-prone upper third.
    pub fn dealias_mask(&self) -> Vec<bool> {
        let n = self.n_points as i64;
        let keep = n / 3;
        (0..n)
            .map(|j| {
                let signed = if j < n / 2 { j } else { j - n };
                signed.abs() <= keep
            })
            .collect()
    }
}

/// A complex-valued function sampled on a [`GridSpec`].
///
/// Invariant: `values.len() == grid.n_points` and every sample is finite.
/// All constructors enforce this, so downstream code may assume it.
#[derive(Clone, PartialEq)]
pub struct Field {
    /// The grid the samples live on (shared, immutable).
    pub grid: Arc<GridSpec>,
    /// Samples values\[j\] = f(x_j).
    pub values: Vec<Complex64>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Field {{ n = {}, L = {}, values = [{:?}, {:?}, …] }}",
            self.grid.n_points, self.grid.half_width, self.values[0], self.values[1]
        )
    }
}

impl Field {
    /// Sample a function on the grid. The samples must all come out finite.
    pub fn from_fn(
        grid: &Arc<GridSpec>,
        mut f: impl FnMut(f64) -> Complex64,
    ) -> Result<Field> {
        let values: Vec<Complex64> = grid.points().map(&mut f).collect();
        Field::from_values(grid, values)
    }

    /// Wrap existing samples, validating length and finiteness.
    pub fn from_values(grid: &Arc<GridSpec>, values: Vec<Complex64>) -> Result<Field> {
        if values.len() != grid.n_points {
            return Err(Error::InvalidField {
                reason: format!(
                    "expected {} samples, got {}",
                    grid.n_points,
                    values.len()
                ),
            });
        }
        if let Some(j) = first_non_finite(&values) {
            return Err(Error::InvalidField {
                reason: format!("non-finite sample at index {j}: {:?}", values[j]),
            });
        }
        Ok(Field {
            grid: Arc::clone(grid),
            values,
        })
    }

    /// The zero field.
    pub fn zeros(grid: &Arc<GridSpec>) -> Field {
        Field {
            grid: Arc::clone(grid),
            values: vec![Complex64::new(0.0, 0.0); grid.n_points],
        }
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True if the field has no samples (cannot happen for valid grids).
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Apply a sample-wise map, keeping the grid.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Field {
        Field {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Largest |Im f(x_j)| over the grid; zero for genuinely real data.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Largest |f(x_j)| over the grid.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn first_non_finite(values: &[Complex64]) -> Option<usize> {
    values
        .iter()
        .position(|v| !(v.re.is_finite() && v.im.is_finite()))
}

// ─── FFT plumbing ────────────────────────────────────────────────────────────

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan_forward(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

fn plan_inverse(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

/// Forward FFT (unnormalized, matching the rustfft convention).
pub(crate) fn fft_forward(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    fft_forward_inplace(&mut buf);
    buf
}

/// Inverse FFT including the 1/N normalization, so
/// `fft_inverse(fft_forward(v)) == v` up to roundoff.
pub(crate) fn fft_inverse(mut spectrum: Vec<Complex64>) -> Vec<Complex64> {
    fft_inverse_inplace(&mut spectrum);
    spectrum
}

/// Inverse FFT in place, with normalization (avoids reallocating).
pub(crate) fn fft_inverse_inplace(spectrum: &mut [Complex64]) {
    let n = spectrum.len();
    plan_inverse(n).process(spectrum);
    let scale = 1.0 / n as f64;
    for v in spectrum.iter_mut() {
        *v *= scale;
    }
}

/// Forward FFT in place (unnormalized).
pub(crate) fn fft_forward_inplace(values: &mut [Complex64]) {
    plan_forward(values.len()).process(values);
}

// ─── Spectral calculus ───────────────────────────────────────────────────────

/// First spatial derivative via the Fourier symbol ik.
///
/// The Nyquist mode is zeroed: on an N-point real signal it carries no
/// directional information (e^{ik_N x} ≡ cos at the sample points) and
/// multiplying it by ik would inject a spurious imaginary component.
pub fn spectral_derivative(f: &Field) -> Field {
    let n = f.grid.n_points;
    let mut spectrum = fft_forward(&f.values);
    for (j, v) in spectrum.iter_mut().enumerate() {
        if j == n / 2 {
            *v = Complex64::new(0.0, 0.0);
        } else {
            *v *= Complex64::new(0.0, f.grid.wavenumbers[j]);
        }
    }
    Field {
        grid: Arc::clone(&f.grid),
        values: fft_inverse(spectrum),
    }
}

/// Second spatial derivative via the Fourier symbol −k².
///
/// The Nyquist mode is kept: −k² is real and even, so the mode is treated
/// consistently (this matters for the exactness of Laplacian identities).
pub fn second_derivative(f: &Field) -> Field {
    let mut spectrum = fft_forward(&f.values);
    for (j, v) in spectrum.iter_mut().enumerate() {
        let k = f.grid.wavenumbers[j];
        *v *= -k * k;
    }
    Field {
        grid: Arc::clone(&f.grid),
        values: fft_inverse(spectrum),
    }
}

/// Periodic trapezoidal quadrature h·Σ_j f(x_j), in fixed index order.
///
/// On a periodic grid the trapezoidal rule has no endpoint correction, and
/// the fixed summation order makes the result bit-reproducible.
pub fn quadrature(f: &Field) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &v in &f.values {
        acc += v;
    }
    acc * f.grid.spacing
}

/// Real part of the quadrature — for integrands that are real by
/// construction (densities, squared moduli).
pub fn quadrature_re(f: &Field) -> f64 {
    let mut acc = 0.0;
    for &v in &f.values {
        acc += v.re;
    }
    acc * f.grid.spacing
}

/// Cumulative integral F(x_j) = ∫_{−L}^{x_j} f, anchored so F(x_0) = 0.
///
/// Computed spectrally: the mean of f integrates to a linear ramp that is
/// handled in closed form, and the zero-mean remainder gets the Fourier
/// antiderivative symbol 1/(ik), with the Nyquist mode zeroed to match
/// [`spectral_derivative`]. For smooth periodic integrands the result is
/// accurate to roundoff — a low-order running sum here would feed an O(h)
/// phase error into every gauge transform built on top of it.
pub fn cumulative_integral(f: &Field) -> Field {
    let n = f.grid.n_points;
    let h = f.grid.spacing;
    let mut spectrum = fft_forward(&f.values);
    let mean = spectrum[0] / n as f64;
    for (j, v) in spectrum.iter_mut().enumerate() {
        if j == 0 || j == n / 2 {
            *v = Complex64::new(0.0, 0.0);
        } else {
            *v /= Complex64::new(0.0, f.grid.wavenumbers[j]);
        }
    }
    let oscillation = fft_inverse(spectrum);
    let anchor = oscillation[0];
    let values = oscillation
        .iter()
        .enumerate()
        .map(|(j, &v)| v - anchor + mean * (h * j as f64))
        .collect();
    Field {
        grid: Arc::clone(&f.grid),
        values,
    }
}

/// The norm quantities every functional is assembled from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    /// ∫|f|² dx.
    pub l2_sq: f64,
    /// ∫|∂_x f|² dx.
    pub h1dot_sq: f64,
    /// ∫|f|⁴ dx.
    pub l4_4: f64,
    /// ∫|f|⁶ dx.
    pub l6_6: f64,
}

/// Compute ∫|f|², ∫|∂_x f|², ∫|f|⁴, ∫|f|⁶ in one pass (plus one derivative).
pub fn norms(f: &Field) -> Norms {
    let h = f.grid.spacing;
    let (mut s2, mut s4, mut s6) = (0.0, 0.0, 0.0);
    for v in &f.values {
        let a2 = v.norm_sqr();
        s2 += a2;
        s4 += a2 * a2;
        s6 += a2 * a2 * a2;
    }
    let df = spectral_derivative(f);
    let mut sd = 0.0;
    for v in &df.values {
        sd += v.norm_sqr();
    }
    Norms {
        l2_sq: s2 * h,
        h1dot_sq: sd * h,
        l4_4: s4 * h,
        l6_6: s6 * h,
    }
}

/// ∫|f − g|² dx (squared L² distance). Panics if the grids differ.
pub fn l2_distance_sq(f: &Field, g: &Field) -> f64 {
    assert!(
        f.grid.same_layout(&g.grid),
        "l2_distance_sq requires a common grid"
    );
    let mut acc = 0.0;
    for (a, b) in f.values.iter().zip(&g.values) {
        acc += (a - b).norm_sqr();
    }
    acc * f.grid.spacing
}

/// ∫|f − g|² dx, square-rooted. Panics if the grids differ.
pub fn l2_distance(f: &Field, g: &Field) -> f64 {
    l2_distance_sq(f, g).sqrt()
}
