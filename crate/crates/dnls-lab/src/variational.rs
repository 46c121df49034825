//! Variational characterisation of the soliton threshold.
//!
//! The action level of the ground-state soliton can be recovered without any
//! closed-form profile by minimising the coercive part `H` of the action over
//! the constraint set `{K = 0}` (equivalently `{K ≤ 0}`, since `H` is strictly
//! increasing under amplitude scaling while `K` changes sign).  This module
//! implements the three ingredients:
//!
//! * [`rescale_to_nehari`] — amplitude rescaling of an arbitrary field onto
//!   the constraint manifold,
//! * [`schwarz_symmetrize`] — discrete symmetric-decreasing rearrangement,
//! * [`minimize_threshold`] — preconditioned projected gradient descent for
//!   the threshold value itself.
//!
//! The minimiser is sought in the structured form `e^{i(c/2)x} p(x)` with `p`
//! real, even and nonnegative; the phase factor carries the momentum part of
//! the action, so the search space reduces to real profiles.  In that
//! representation the constraint and objective become polynomial in the
//! elementary integrals `∫ p′²`, `∫ p²`, `∫ p⁴`, `∫ p⁶`, which the iteration
//! exploits heavily: projecting onto `{K = 0}` amounts to extracting the
//! positive root of a quadratic in the squared scaling factor.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functionals::nehari_k;
use crate::grid::{fft_forward, fft_inverse, Field, GridSpec};
use crate::params::{Params, Regime};

/// Absolute tolerance on `K` used when a caller does not override it.
pub const DEFAULT_K_TOL: f64 = 1e-10;

/// Relative plateau tolerance on the objective used when a caller does not
/// override it.
pub const DEFAULT_J_TOL: f64 = 1e-8;

/// Default cadence (in iterations) of the symmetric-decreasing rearrangement.
pub const DEFAULT_SYMMETRIZE_EVERY: usize = 25;

/// Default iteration cap for [`minimize_threshold`].
pub const DEFAULT_MAX_ITERATIONS: usize = 5000;

/// Imaginary parts above this magnitude disqualify a field from the
/// rearrangement, which is only defined for real data.
const IMAG_TOL: f64 = 1e-14;

/// Options controlling [`minimize_threshold`].
#[derive(Debug, Clone)]
pub struct MinimizeOptions {
    /// Grid on which the profile is discretised.
    pub grid: Arc<GridSpec>,
    /// Absolute tolerance on the constraint value `K`.
    pub k_tol: f64,
    /// Relative plateau tolerance on the objective `H`.
    pub j_tol: f64,
    /// Apply the symmetric-decreasing rearrangement every this many
    /// iterations (0 disables it).
    pub symmetrize_every: usize,
    /// Hard cap on descent iterations.
    pub max_iterations: usize,
    /// Reserved for future randomised restarts; the default initialisation is
    /// deterministic and ignores it.
    pub seed: Option<u64>,
}

impl MinimizeOptions {
    /// Default options on the given grid.
    pub fn new(grid: Arc<GridSpec>) -> Self {
        MinimizeOptions {
            grid,
            k_tol: DEFAULT_K_TOL,
            j_tol: DEFAULT_J_TOL,
            symmetrize_every: DEFAULT_SYMMETRIZE_EVERY,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            seed: None,
        }
    }
}

/// One record of the descent history: iteration index, objective value and
/// constraint value after that iteration's update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryEntry {
    /// Iteration number (0 is the projected initial guess).
    pub iteration: usize,
    /// Objective `H` after the update.
    pub h: f64,
    /// Constraint `K` after the update (machine-zero after projection).
    pub k: f64,
}

/// Outcome of [`minimize_threshold`].
#[derive(Debug, Clone)]
pub struct MinimizationResult {
    /// The structured minimiser `e^{i(c/2)x} p(x)` as a complex field.
    pub minimizer: Field,
    /// Action value of the minimiser; on the constraint this equals the
    /// objective `H` and approximates the soliton action level.
    pub j_value: f64,
    /// Constraint value of the minimiser (machine-zero after the final
    /// projection).
    pub k_value: f64,
    /// Number of descent iterations performed.
    pub iterations: usize,
    /// Whether the objective reached a plateau (relative changes below
    /// `j_tol`) with the constraint satisfied before the iteration cap.
    pub converged: bool,
    /// Objective/constraint history, one entry per iteration.
    pub history: Vec<HistoryEntry>,
}

// ---------------------------------------------------------------------------
// Rescaling onto the constraint manifold
// ---------------------------------------------------------------------------

/// Rescales `f` by the largest `λ ∈ (0, 1]` with `K(λ f) = 0`.
///
/// Returns the scaling factor and the rescaled field.  Requires `K(f) ≤ 0`;
/// when `K(f)` is already within `k_tol` of zero the field is returned
/// unchanged with `λ = 1`.  When `K(f) > k_tol` no root exists in `(0, 1]`
/// (the field must be scaled *up* to reach the constraint) and
/// [`Error::NoRoot`] is returned.
///
/// `K(λ f)` is an even polynomial in `λ` with a single sign change on
/// `(0, 1]` whenever `K(f) < 0`, so bisection from a bracketing pair finds
/// the largest root; the search stops as soon as `|K| < k_tol`.
pub fn rescale_to_nehari(f: &Field, params: Params, k_tol: f64) -> Result<(f64, Field)> {
    let k_full = nehari_k(f, params);
    if k_full.abs() <= k_tol {
        return Ok((1.0, f.clone()));
    }
    if k_full > 0.0 {
        return Err(Error::NoRoot {
            lambda_lo: 1.0,
            k_lo: k_full,
            k_hi: k_full,
        });
    }

    let k_of = |lambda: f64| -> f64 {
        let scaled = f.map(|v| v * lambda);
        nehari_k(&scaled, params)
    };

    // Scan λ = 2^{-m} until the quadratic part dominates and K turns
    // positive; K < 0 at λ = 1, so the sign change brackets the largest root.
    let mut hi = 1.0_f64; // K(hi f) < 0
    let mut lo = None; // K(lo f) > 0
    for m in 1..=60 {
        let lambda = 0.5_f64.powi(m);
        let k = k_of(lambda);
        if k.abs() <= k_tol {
            return Ok((lambda, f.map(|v| v * lambda)));
        }
        if k > 0.0 {
            lo = Some(lambda);
            break;
        }
        hi = lambda;
    }
    let mut lo = lo.ok_or(Error::NoRoot {
        lambda_lo: 0.5_f64.powi(60),
        k_lo: k_of(0.5_f64.powi(60)),
        k_hi: k_full,
    })?;

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let k = k_of(mid);
        if k.abs() <= k_tol {
            return Ok((mid, f.map(|v| v * mid)));
        }
        if k > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= f64::EPSILON * hi {
            break;
        }
    }
    // The bracket has collapsed to one ulp; return its midpoint.  |K| there is
    // bounded by |K'|·ulp, which is far below any practical tolerance.
    let lambda = 0.5 * (lo + hi);
    Ok((lambda, f.map(|v| v * lambda)))
}

// ---------------------------------------------------------------------------
// Symmetric-decreasing rearrangement
// ---------------------------------------------------------------------------

/// Discrete symmetric-decreasing rearrangement of a real nonnegative field.
///
/// The sample magnitudes are sorted in descending order (stable with respect
/// to the original index) and laid out from the grid centre outward: the
/// largest value at `x = 0`, then alternating right/left at increasing
/// distance, with the smallest value at the left edge.  The multiset of
/// magnitudes is preserved exactly, hence so is every discrete `Lᵖ` norm.
///
/// Fields with imaginary parts exceeding `1e-14` in magnitude are rejected
/// with [`Error::ComplexInput`]; callers pass the modulus of a complex field.
/// Negative real parts are folded to their absolute value before sorting.
pub fn schwarz_symmetrize(f: &Field) -> Result<Field> {
    let n = f.len();
    for (j, v) in f.values.iter().enumerate() {
        if v.im.abs() > IMAG_TOL {
            return Err(Error::ComplexInput {
                index: j,
                imag: v.im,
                tol: IMAG_TOL,
            });
        }
    }

    let mut ranked: Vec<(usize, f64)> = f
        .values
        .iter()
        .map(|v| v.re.abs())
        .enumerate()
        .collect();
    // Stable descending sort by magnitude; ties keep original index order.
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("field values are finite"));

    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let centre = n / 2;
    for (rank, &(_, value)) in ranked.iter().enumerate() {
        // Rank r occupies the r-th closest slot to the centre, preferring the
        // right side on ties: centre, centre+1, centre-1, centre+2, ...
        // The final rank lands on index 0 (the left edge, x = -L), which has
        // no right-hand partner on a periodic grid.
        let j = if rank == 0 {
            centre
        } else if rank == n - 1 {
            0
        } else {
            let d = rank.div_ceil(2);
            if rank % 2 == 1 {
                centre + d
            } else {
                centre - d
            }
        };
        out[j] = Complex64::new(value, 0.0);
    }
    Field::from_values(&f.grid, out)
}

// ---------------------------------------------------------------------------
// Threshold minimisation
// ---------------------------------------------------------------------------

/// Elementary integrals of a real profile, from which every functional used
/// by the descent is polynomial.
#[derive(Debug, Clone, Copy)]
struct ProfileMoments {
    /// `∫ p′²` (spectral derivative, Nyquist mode excluded, matching the
    /// first-derivative convention used by the field functionals).
    deriv_sq: f64,
    /// `∫ p²`.
    l2: f64,
    /// `∫ p⁴`.
    l4: f64,
    /// `∫ p⁶`.
    l6: f64,
}

/// Coefficients of the objective `H = α·(∫p′² + σ∫p²) + β₄∫p⁴ + β₆∫p⁶` and
/// the constraint `K = (∫p′² + σ∫p²) + (c/2)∫p⁴ − (3/16)∫p⁶` in profile form.
#[derive(Debug, Clone, Copy)]
struct ProfileFunctionals {
    /// Shifted frequency `ω − c²/4` (zero on the borderline).
    sigma: f64,
    /// Weight of the quadratic part in `H`.
    alpha: f64,
    /// Weight of `∫p⁴` in `H`.
    beta4: f64,
    /// Weight of `∫p⁶` in `H`.
    beta6: f64,
    /// Weight of `∫p⁴` in `K`.
    c_half: f64,
}

impl ProfileFunctionals {
    fn new(params: Params) -> Result<Self> {
        let sigma = 0.25 * params.discriminant();
        match params.regime() {
            Regime::Subcritical => Ok(ProfileFunctionals {
                sigma,
                alpha: 0.25,
                beta4: 0.0,
                beta6: 1.0 / 64.0,
                c_half: 0.5 * params.c,
            }),
            Regime::CriticalPositive => Ok(ProfileFunctionals {
                sigma: 0.0,
                alpha: 1.0 / 3.0,
                beta4: params.c / 24.0,
                beta6: 0.0,
                c_half: 0.5 * params.c,
            }),
            regime => Err(Error::UnsupportedRegime {
                omega: params.omega,
                c: params.c,
                regime,
                required: crate::soliton::SOLITON_REQUIRES,
            }),
        }
    }

    fn quadratic(&self, m: &ProfileMoments) -> f64 {
        m.deriv_sq + self.sigma * m.l2
    }

    fn objective(&self, m: &ProfileMoments) -> f64 {
        self.alpha * self.quadratic(m) + self.beta4 * m.l4 + self.beta6 * m.l6
    }

    fn constraint(&self, m: &ProfileMoments) -> f64 {
        self.quadratic(m) + self.c_half * m.l4 - (3.0 / 16.0) * m.l6
    }

    /// Spectral shift for the Sobolev preconditioner: `σ` when positive,
    /// `c²/8` on the borderline where `σ = 0`.
    fn sigma_shift(&self) -> f64 {
        if self.sigma > 0.0 {
            self.sigma
        } else {
            0.5 * self.c_half * self.c_half
        }
    }

    /// Largest positive root `λ` of `K(λ p) = 0` given the moments of `p`.
    ///
    /// With `s = λ²` the constraint reads `A + B s − C s² = 0` where
    /// `A = ∫p′² + σ∫p² ≥ 0` and `C = (3/16)∫p⁶ > 0`, so the positive root is
    /// `s = (B + √(B² + 4AC)) / (2C)` regardless of the sign of `B`.
    fn projection_scale(&self, m: &ProfileMoments) -> Option<f64> {
        let a = self.quadratic(m);
        let b = self.c_half * m.l4;
        let c = (3.0 / 16.0) * m.l6;
        if c <= 0.0 || a < 0.0 {
            return None;
        }
        let s = (b + (b * b + 4.0 * a * c).sqrt()) / (2.0 * c);
        if s.is_finite() && s > 0.0 {
            Some(s.sqrt())
        } else {
            None
        }
    }
}

/// Workspace for the profile iteration: keeps the real samples together with
/// their spectrum so derivative quantities cost one transform, not two.
struct ProfileState {
    grid: Arc<GridSpec>,
    values: Vec<f64>,
    spectrum: Vec<Complex64>,
    moments: ProfileMoments,
}

impl ProfileState {
    fn new(grid: Arc<GridSpec>, values: Vec<f64>) -> Self {
        let (spectrum, moments) = Self::analyse(&grid, &values);
        ProfileState {
            grid,
            values,
            spectrum,
            moments,
        }
    }

    fn analyse(grid: &GridSpec, values: &[f64]) -> (Vec<Complex64>, ProfileMoments) {
        let n = grid.n_points;
        let h = grid.spacing;
        let complex: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let spectrum = fft_forward(&complex);
        // Parseval: ∫ p′² = (h/N) Σ k² |p̂|², skipping the Nyquist slot to
        // match the odd first-derivative symbol used everywhere else.
        let nyquist = n / 2;
        let mut deriv_sq = 0.0;
        for (j, (&k, c)) in grid.wavenumbers.iter().zip(spectrum.iter()).enumerate() {
            if j == nyquist {
                continue;
            }
            deriv_sq += k * k * c.norm_sqr();
        }
        deriv_sq *= h / n as f64;
        let (mut l2, mut l4, mut l6) = (0.0, 0.0, 0.0);
        for &v in values {
            let sq = v * v;
            l2 += sq;
            l4 += sq * sq;
            l6 += sq * sq * sq;
        }
        let moments = ProfileMoments {
            deriv_sq,
            l2: l2 * h,
            l4: l4 * h,
            l6: l6 * h,
        };
        (spectrum, moments)
    }

    /// Rescales the profile in place by `λ`, updating spectrum and moments
    /// without a new transform.
    fn scale(&mut self, lambda: f64) {
        for v in &mut self.values {
            *v *= lambda;
        }
        for c in &mut self.spectrum {
            *c *= lambda;
        }
        let s2 = lambda * lambda;
        self.moments.deriv_sq *= s2;
        self.moments.l2 *= s2;
        self.moments.l4 *= s2 * s2;
        self.moments.l6 *= s2 * s2 * s2;
    }

    /// Applies the inverse Sobolev preconditioner `(σ₀ − ∂²ₓ)⁻¹` spectrally.
    fn preconditioned(&self, g: &[f64], sigma0: f64) -> Vec<f64> {
        let complex: Vec<Complex64> = g.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut ghat = fft_forward(&complex);
        for (k, c) in self.grid.wavenumbers.iter().zip(ghat.iter_mut()) {
            *c /= k * k + sigma0;
        }
        fft_inverse(ghat).into_iter().map(|v| v.re).collect()
    }

    /// Constrained descent direction `M⁻¹(∇H − μ∇K)`, with `M = σ₀ − ∂²ₓ`
    /// and the multiplier `μ` chosen so that `⟨∇K, d⟩ = 0`: the direction is
    /// tangent to `{K = 0}`, so the radial reprojection after a step is a
    /// second-order correction and never cancels the descent.  At a
    /// constrained critical point `∇H ∥ ∇K` — the Euler–Lagrange equation of
    /// the problem — the direction vanishes, so a stalled line search is a
    /// genuine stationarity signal rather than an artifact of stepping off
    /// the manifold.
    fn descent_direction(&self, fun: &ProfileFunctionals) -> Vec<f64> {
        let n = self.grid.n_points;
        // L² gradients share the quadratic part q = −2p″ + 2σp:
        //   ∇H = α·q + 4β₄ p³ + 6β₆ p⁵,
        //   ∇K = q + 4·(c/2) p³ − (9/8) p⁵.
        let second: Vec<Complex64> = self
            .grid
            .wavenumbers
            .iter()
            .zip(self.spectrum.iter())
            .map(|(&k, c)| c * (-k * k))
            .collect();
        let second = fft_inverse(second);
        let mut grad_h = Vec::with_capacity(n);
        let mut grad_k = Vec::with_capacity(n);
        for (j, &p) in self.values.iter().enumerate() {
            let cubic = p * p * p;
            let quintic = cubic * p * p;
            let q = -2.0 * second[j].re + 2.0 * fun.sigma * p;
            grad_h.push(fun.alpha * q + 4.0 * fun.beta4 * cubic + 6.0 * fun.beta6 * quintic);
            grad_k.push(q + 4.0 * fun.c_half * cubic - (9.0 / 8.0) * quintic);
        }
        let sigma0 = fun.sigma_shift();
        let pre_h = self.preconditioned(&grad_h, sigma0);
        let pre_k = self.preconditioned(&grad_k, sigma0);
        // μ = ⟨∇K, M⁻¹∇H⟩ / ⟨∇K, M⁻¹∇K⟩ (the h factors cancel); the
        // denominator is ‖∇K‖² in the M⁻¹ metric, positive away from zero.
        let mut numer = 0.0;
        let mut denom = 0.0;
        for ((&gk, &ph), &pk) in grad_k.iter().zip(pre_h.iter()).zip(pre_k.iter()) {
            numer += gk * ph;
            denom += gk * pk;
        }
        let mu = if denom.abs() > f64::MIN_POSITIVE {
            numer / denom
        } else {
            0.0
        };
        pre_h
            .iter()
            .zip(pre_k.iter())
            .map(|(&ph, &pk)| ph - mu * pk)
            .collect()
    }
}

/// Minimises the coercive action part `H` over the constraint set `{K = 0}`,
/// yielding the soliton action threshold variationally.
///
/// The search runs over real, nonnegative, centred profiles `p`; the returned
/// minimiser is the structured field `e^{i(c/2)x} p(x)`.  Each iteration steps
/// along the constraint-tangent preconditioned gradient with a backtracking
/// line search (halving from an adaptively grown start until the projected
/// objective decreases) and projects back onto the constraint by exact
/// amplitude rescaling; every `symmetrize_every` iterations the profile is
/// replaced by its symmetric-decreasing rearrangement, which keeps the
/// iterate centred and unimodal.  The initial guess is a centred Gaussian,
/// doubled in amplitude until `K < 0` and then projected onto the constraint.
///
/// Convergence means the objective plateaued (three consecutive relative
/// changes below `j_tol`) with `|K|` below `k_tol`; hitting the iteration cap
/// first yields `converged = false` with the best iterate still returned.
/// Requires parameters in a soliton-bearing regime.
pub fn minimize_threshold(
    params: Params,
    options: &MinimizeOptions,
) -> Result<MinimizationResult> {
    let fun = ProfileFunctionals::new(params)?;
    let grid = options.grid.clone();
    let n = grid.n_points;

    // Deterministic initial guess: a centred Gaussian whose width follows the
    // natural length scale 1/√σ₀, doubled until the constraint is negative.
    let width_sq = 1.0 / fun.sigma_shift().max(1e-2);
    let mut amplitude = 1.0;
    let mut state = loop {
        let values: Vec<f64> = (0..n)
            .map(|j| {
                let x = grid.x(j);
                amplitude * (-x * x / (2.0 * width_sq)).exp()
            })
            .collect();
        let state = ProfileState::new(grid.clone(), values);
        if fun.constraint(&state.moments) < 0.0 {
            break state;
        }
        amplitude *= 2.0;
        if amplitude > 1e9 {
            return Err(Error::InvalidField {
                reason: "initial guess never reached a negative constraint value; \
                         the grid may be too coarse for these parameters"
                    .into(),
            });
        }
    };

    // Project the initial guess onto {K = 0}.
    if let Some(lambda) = fun.projection_scale(&state.moments) {
        state.scale(lambda);
    }

    let mut history = Vec::with_capacity(options.max_iterations + 1);
    let mut h_current = fun.objective(&state.moments);
    history.push(HistoryEntry {
        iteration: 0,
        h: h_current,
        k: fun.constraint(&state.moments),
    });

    let mut plateau = 0usize;
    let mut converged = false;
    let mut iterations = 0usize;
    // Line-search warm start: grows after a success, so the search is not
    // pinned to a fixed scale; a failed search leaves it where it was.
    let mut step_start = 0.5_f64;

    for iter in 1..=options.max_iterations {
        iterations = iter;

        // Periodic symmetric-decreasing rearrangement keeps the iterate
        // centred; it can raise H by at most the rearrangement defect, so the
        // plateau counter restarts afterwards.
        if options.symmetrize_every > 0 && iter % options.symmetrize_every == 0 {
            let magnitudes: Vec<Complex64> = state
                .values
                .iter()
                .map(|&v| Complex64::new(v.abs(), 0.0))
                .collect();
            let field = Field::from_values(&grid, magnitudes)?;
            let rearranged = schwarz_symmetrize(&field)?;
            let values: Vec<f64> = rearranged.values.iter().map(|v| v.re).collect();
            let mut next = ProfileState::new(grid.clone(), values);
            if let Some(lambda) = fun.projection_scale(&next.moments) {
                next.scale(lambda);
            }
            state = next;
            h_current = fun.objective(&state.moments);
            plateau = 0;
        }

        let direction = state.descent_direction(&fun);
        let mut step = step_start;
        let mut accepted = false;
        while step > 1e-13 {
            let trial: Vec<f64> = state
                .values
                .iter()
                .zip(direction.iter())
                .map(|(&p, &d)| p - step * d)
                .collect();
            let mut trial_state = ProfileState::new(grid.clone(), trial);
            match fun.projection_scale(&trial_state.moments) {
                Some(lambda) => trial_state.scale(lambda),
                None => {
                    step *= 0.5;
                    continue;
                }
            }
            let h_trial = fun.objective(&trial_state.moments);
            if h_trial < h_current {
                let delta = h_current - h_trial;
                state = trial_state;
                h_current = h_trial;
                accepted = true;
                step_start = (2.0 * step).min(1.0);
                if delta <= options.j_tol * h_current.abs().max(1.0) {
                    plateau += 1;
                } else {
                    plateau = 0;
                }
                break;
            }
            step *= 0.5;
        }

        let k_now = fun.constraint(&state.moments);
        history.push(HistoryEntry {
            iteration: iter,
            h: h_current,
            k: k_now,
        });

        if !accepted {
            // No descent direction at line-search resolution: the iterate is
            // stationary on the constraint manifold.
            plateau += 1;
        }
        if plateau >= 3 && k_now.abs() <= options.k_tol {
            converged = true;
            break;
        }
    }

    let k_value = fun.constraint(&state.moments);
    // On the constraint the action equals H; report the polynomial form the
    // iteration actually controlled.
    let j_value = h_current + k_value / if fun.beta6 > 0.0 { 4.0 } else { 6.0 };

    let half_c = 0.5 * params.c;
    let structured: Vec<Complex64> = state
        .values
        .iter()
        .enumerate()
        .map(|(j, &p)| Complex64::from_polar(1.0, half_c * grid.x(j)) * p)
        .collect();
    let minimizer = Field::from_values(&grid, structured)?;

    Ok(MinimizationResult {
        minimizer,
        j_value,
        k_value,
        iterations,
        converged,
        history,
    })
}
