/* C interface to the dnls-lab numerical laboratory (a derivative nonlinear
 * Schrodinger equation on a periodic box).  Fields cross the boundary as
 * opaque DnlsField* handles owned by the caller; every fallible call returns
 * a DnlsStatus, and a thread-local message readable through
 * dnls_last_error_message() explains failures.
 */

#ifndef DNLS_LAB_H
#define DNLS_LAB_H

/* Generated by cbindgen from dnls-lab-ffi/src/lib.rs; regenerate by building that crate instead of editing this file. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Principal equation form (the variable the solitary waves are written in).
 */
#define DNLS_FORM_U 0

/**
 * Divergence form, reachable from the principal form by the gauge map with
 * a = -3/4.
 */
#define DNLS_FORM_V 1

/**
 * Membership verdict of `dnls_classify()`.
 */
enum DnlsClassSet
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  /**
   * Action below the threshold and K >= 0: bounded orbits.
   */
  DNLS_CLASS_SET_K_PLUS = 0,
  /**
   * Action below the threshold and K < 0: the complementary invariant
   * set.
   */
  DNLS_CLASS_SET_K_MINUS = 1,
  /**
   * Action at or above the threshold: outside the dichotomy.
   */
  DNLS_CLASS_SET_ABOVE_THRESHOLD = 2,
};
#ifndef __cplusplus
typedef int32_t DnlsClassSet;
#endif // __cplusplus

/**
 * Which clause of the mass-threshold certificate matched.
 */
enum DnlsCondition
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  /**
   * Mass strictly below 2*pi.
   */
  DNLS_CONDITION_MASS_BELOW_TWO_PI = 0,
  /**
   * Mass at 2*pi (within tolerance) with negative momentum.
   */
  DNLS_CONDITION_MASS_EQ_NEG_MOMENTUM = 1,
  /**
   * Mass at 2*pi, momentum at zero, negative energy.
   */
  DNLS_CONDITION_MASS_EQ_ZERO_MOM_NEG_ENERGY = 2,
  /**
   * No clause matched; no certificate is available.
   */
  DNLS_CONDITION_NO_CERTIFICATE = 3,
};
#ifndef __cplusplus
typedef int32_t DnlsCondition;
#endif // __cplusplus

/**
 * Result code of every fallible `dnls_*` call; zero means success.
 */
enum DnlsStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  /**
   * The call succeeded and every requested output was written.
   */
  DNLS_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  DNLS_STATUS_NULL_ARGUMENT = 1,
  /**
   * A scalar or size argument was malformed: wrong sample count,
   * non-finite value, grid size that is not a power of two, unknown
   * equation form, and the like.
   */
  DNLS_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The (omega, c) pair lies outside the regime the operation is defined
   * on; solitary-wave operations need 4*omega > c*c, or equality with
   * c > 0.
   */
  DNLS_STATUS_UNSUPPORTED_REGIME = 3,
  /**
   * A constraint-root search found no sign change, so the field could not
   * be scaled onto the constraint manifold.
   */
  DNLS_STATUS_NO_ROOT = 4,
  /**
   * An operation that needs a real-valued field received complex samples.
   */
  DNLS_STATUS_COMPLEX_INPUT = 5,
  /**
   * A bound defined only on the K+ set was requested for data outside it.
   */
  DNLS_STATUS_NOT_IN_K_PLUS = 6,
  /**
   * Time evolution produced a non-finite sample (a blow-up indicator).
   */
  DNLS_STATUS_NON_FINITE = 7,
  /**
   * A file could not be parsed.  Reserved: this layer does no file I/O.
   */
  DNLS_STATUS_FORMAT = 8,
  /**
   * An operating-system I/O failure.  Reserved: this layer does no file
   * I/O.
   */
  DNLS_STATUS_IO = 9,
  /**
   * A panic was caught at the boundary; the error message carries the
   * panic text.  Always a bug worth reporting.
   */
  DNLS_STATUS_INTERNAL_PANIC = 10,
};
#ifndef __cplusplus
typedef int32_t DnlsStatus;
#endif // __cplusplus

/**
 * A complex field sampled on its uniform periodic grid.
 *
 * Opaque: create one with `dnls_field_from_samples()`,
 * `dnls_soliton_profile()`, or any function with a `DnlsField**`
 * out-parameter, and release it with `dnls_field_free()`.
 */
typedef struct DnlsField DnlsField;

/**
 * The four norm quantities every functional is assembled from.
 */
typedef struct {
  /**
   * Integral of |f|^2.
   */
  double l2_sq;
  /**
   * Integral of |f'|^2.
   */
  double h1dot_sq;
  /**
   * Integral of |f|^4.
   */
  double l4_4;
  /**
   * Integral of |f|^6.
   */
  double l6_6;
} DnlsNorms;

/**
 * The eight functional values reported for a field at fixed (omega, c).
 */
typedef struct {
  /**
   * Mass M, half the integral of |u|^2.
   */
  double mass;
  /**
   * Momentum P.
   */
  double momentum;
  /**
   * Energy E.
   */
  double energy;
  /**
   * Action J = E + omega*M + c*P.
   */
  double action;
  /**
   * Constraint functional K.
   */
  double nehari;
  /**
   * Quadratic-dominated part KQ of the split K = KQ - KN.
   */
  double quadratic_part;
  /**
   * Nonlinear part KN of the split.
   */
  double nonlinear_part;
  /**
   * The nonnegative functional H controlling the derivative norm.
   */
  double positive_part;
} DnlsFunctionalReport;

/**
 * Everything `dnls_classify()` reports.
 */
typedef struct {
  /**
   * Action J of the field.
   */
  double j_value;
  /**
   * Constraint functional K of the field.
   */
  double k_value;
  /**
   * Threshold the action was compared against (the soliton action level).
   */
  double j_threshold;
  /**
   * Membership verdict.
   */
  DnlsClassSet set;
  /**
   * True when `h1_bound` is meaningful (K+ members only).
   */
  bool has_h1_bound;
  /**
   * A priori bound on the squared derivative norm along the flow, valid
   * while the solution stays in K+.
   */
  double h1_bound;
} DnlsClassification;

/**
 * Lower-bound verification for K on the K+ set:
 * K >= min{4*(threshold - J), quarter of the shifted-derivative energy}.
 */
typedef struct {
  /**
   * K itself.
   */
  double lhs;
  /**
   * The smaller of the two candidate lower bounds.
   */
  double rhs;
  /**
   * Whether lhs >= rhs within a small solver slack.
   */
  bool holds;
} DnlsKBound;

/**
 * Outcome of `dnls_certify()`.
 */
typedef struct {
  /**
   * The certificate clause the field satisfied, if any.
   */
  DnlsCondition condition;
  /**
   * True when the ladder search found a speed landing the field in K+ at
   * borderline parameters; the three fields below are NaN otherwise.
   */
  bool has_admissible_c;
  /**
   * A speed c at which the field lies in K+ at (c*c/4, c).
   */
  double admissible_c;
  /**
   * Frequency of those borderline parameters, exactly c*c/4.
   */
  double kplus_omega;
  /**
   * Speed of those borderline parameters, equal to `admissible_c`.
   */
  double kplus_c;
} DnlsCertificate;

/**
 * Scalar summary of `dnls_minimize_threshold()`.
 */
typedef struct {
  /**
   * Action value of the minimizer; approximates the soliton action level.
   */
  double j_value;
  /**
   * Constraint value of the minimizer (machine-zero after the final
   * projection).
   */
  double k_value;
  /**
   * Descent iterations performed.
   */
  size_t iterations;
  /**
   * Whether the objective plateaued before the iteration cap.
   */
  bool converged;
} DnlsMinimizeSummary;

/**
 * Worst relative drift of each conserved quantity over an evolution run,
 * max over every step of |Q(t) - Q(0)| / max(|Q(0)|, 1).
 */
typedef struct {
  /**
   * Relative mass drift.
   */
  double mass;
  /**
   * Relative momentum drift.
   */
  double momentum;
  /**
   * Relative energy drift.
   */
  double energy;
} DnlsDriftSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the library's semantic version as a static NUL-terminated string.
 */
const char *dnls_version(void);

/**
 * Copies the calling thread's most recent error message into `buffer` as a
 * NUL-terminated string, truncating when it does not fit.
 *
 * Returns the full message length in bytes (excluding the terminator), so a
 * return value of `capacity` or more signals truncation.  A null `buffer` or
 * zero `capacity` performs no copy and just reports the length.
 *
 * # Safety
 *
 * `buffer`, when non-null, must point to at least `capacity` writable bytes.
 */
size_t dnls_last_error_message(char *buffer, size_t capacity);

/**
 * Builds a field from `n_points` complex samples, given as separate real and
 * imaginary arrays, on the periodic grid covering [-half_width, half_width).
 *
 * `n_points` must be a power of two (at least two) and every sample finite.
 * On success `*out` receives a new handle owned by the caller.
 *
 * # Safety
 *
 * `re` and `im` must each point to `n_points` readable doubles, and `out`
 * must be valid for writing one pointer.
 */
DnlsStatus dnls_field_from_samples(size_t n_points,
                                   double half_width,
                                   const double *re,
                                   const double *im,
                                   DnlsField **out);

/**
 * Deep-copies a field handle; `*out` receives the new caller-owned copy.
 *
 * # Safety
 *
 * `field` must be a live handle from this library, and `out` must be valid
 * for writing one pointer.
 */
DnlsStatus dnls_field_clone(const DnlsField *field, DnlsField **out);

/**
 * Releases a field handle.  Passing null is a no-op; anything else must be
 * a handle from this library, released exactly once and not used afterward.
 *
 * # Safety
 *
 * `field`, when non-null, must be a live handle owned by the caller.
 */
void dnls_field_free(DnlsField *field);

/**
 * Number of samples in the field, or 0 when `field` is null.
 *
 * # Safety
 *
 * `field`, when non-null, must be a live handle from this library.
 */
size_t dnls_field_len(const DnlsField *field);

/**
 * Half-width L of the field's periodic box [-L, L), or NaN when `field` is
 * null.
 *
 * # Safety
 *
 * `field`, when non-null, must be a live handle from this library.
 */
double dnls_field_half_width(const DnlsField *field);

/**
 * Writes the grid positions x_j into `xs`, one double per sample.
 *
 * # Safety
 *
 * `field` must be a live handle, and `xs` must point to as many writable
 * doubles as the field has samples (see `dnls_field_len()`).
 */
DnlsStatus dnls_field_positions(const DnlsField *field, double *xs);

/**
 * Copies the field's samples into separate real and imaginary arrays, one
 * double per sample in each.
 *
 * # Safety
 *
 * `field` must be a live handle, and `re` and `im` must each point to as
 * many writable doubles as the field has samples (see `dnls_field_len()`).
 */
DnlsStatus dnls_field_copy_samples(const DnlsField *field, double *re, double *im);

/**
 * Computes the integrals of |f|^2, |f'|^2, |f|^4, and |f|^6 in one pass
 * (the derivative is spectral).
 *
 * # Safety
 *
 * `field` must be a live handle, and `out` must be valid for writing one
 * `DnlsNorms`.
 */
DnlsStatus dnls_field_norms(const DnlsField *field, DnlsNorms *out);

/**
 * L^2 distance between two fields sampled on the same grid.
 *
 * # Safety
 *
 * `a` and `b` must be live handles, and `out` must be valid for writing one
 * double.
 */
DnlsStatus dnls_field_l2_distance(const DnlsField *a, const DnlsField *b, double *out);

/**
 * Samples the solitary-wave profile at (omega, c) — the bell-shaped
 * amplitude carrying its speed phase — on a fresh grid of `n_points`
 * samples covering [-half_width, half_width).  On success `*out` receives a
 * new caller-owned handle.
 *
 * Requires soliton-bearing parameters: 4*omega > c*c, or equality with
 * c > 0.
 *
 * # Safety
 *
 * `out` must be valid for writing one pointer.
 */
DnlsStatus dnls_soliton_profile(double omega,
                                double c,
                                size_t n_points,
                                double half_width,
                                DnlsField **out);

/**
 * Closed-form squared L^2 norm of the solitary-wave amplitude at
 * (omega, c).  Defined for strictly subcritical parameters
 * (4*omega > c*c); it approaches 4*pi at the critical boundary.
 *
 * # Safety
 *
 * `out` must be valid for writing one double.
 */
DnlsStatus dnls_soliton_mass(double omega, double c, double *out);

/**
 * Closed-form action level of the solitary wave at (omega, c): the
 * variational threshold separating the two invariant sets.
 *
 * # Safety
 *
 * `out` must be valid for writing one double.
 */
DnlsStatus dnls_soliton_action_level(double omega, double c, double *out);

/**
 * Evaluates the two stationary-equation residuals of `field` at (omega, c),
 * each as a discrete L^2 norm: the semilinear form (with the real cubic
 * term) and the quasilinear form (with the derivative cubic terms).
 * Machine-small values certify a solitary wave.  Either out-pointer may be
 * null to skip that residual.
 *
 * # Safety
 *
 * `field` must be a live handle; `semilinear` and `quasilinear`, when
 * non-null, must each be valid for writing one double.
 */
DnlsStatus dnls_soliton_residuals(const DnlsField *field,
                                  double omega,
                                  double c,
                                  double *semilinear,
                                  double *quasilinear);

/**
 * Evaluates mass, momentum, energy, the action J, the constraint K, its
 * split K = KQ - KN, and the nonnegative functional H for `field` at
 * (omega, c).  Requires parameters where the split is defined:
 * 4*omega > c*c, or equality with c > 0.
 *
 * # Safety
 *
 * `field` must be a live handle, and `out` must be valid for writing one
 * `DnlsFunctionalReport`.
 */
DnlsStatus dnls_functionals(const DnlsField *field,
                            double omega,
                            double c,
                            DnlsFunctionalReport *out);

/**
 * Applies the gauge map with strength `a`: multiplies each sample by
 * exp(i*a*(running integral of |v|^2)).  a = -3/4 carries the principal
 * form to the divergence form and a = +3/4 inverts it; the sample moduli —
 * hence the mass — are preserved exactly.  On success `*out` receives a new
 * caller-owned handle.
 *
 * # Safety
 *
 * `field` must be a live handle, and `out` must be valid for writing one
 * pointer.
 */
DnlsStatus dnls_gauge_transform(const DnlsField *field, double a, DnlsField **out);

/**
 * Mass density |v(-L)|^2 at the left edge of the box: the indicator of how
 * much mass the gauge phase's running integral silently drops.  Rounding-
 * level values certify the transform; appreciable values mean the box is
 * too small for the field.
 *
 * # Safety
 *
 * `field` must be a live handle, and `out` must be valid for writing one
 * double.
 */
DnlsStatus dnls_gauge_truncation_indicator(const DnlsField *field, double *out);

/**
 * Places `field` relative to the variational threshold at (omega, c):
 * strictly below it and K >= 0 is K+, strictly below with K < 0 is K-,
 * anything else is above.  For K+ members the report carries the a priori
 * derivative-norm bound.  Requires soliton-bearing parameters.
 *
 * # Safety
 *
 * `field` must be a live handle, and `out` must be valid for writing one
 * `DnlsClassification`.
 */
DnlsStatus dnls_classify(const DnlsField *field, double omega, double c, DnlsClassification *out);

/**
 * Verifies the K lower bound for a K+ member at (omega, c):
 * K >= min{4*(threshold - J), quarter of the shifted-derivative energy}.
 * Fails with `DNLS_STATUS_NOT_IN_K_PLUS` when the field is outside K+.
 *
 * # Safety
 *
 * `field` must be a live handle, and `out` must be valid for writing one
 * `DnlsKBound`.
 */
DnlsStatus dnls_k_lower_bound(const DnlsField *field, double omega, double c, DnlsKBound *out);

/**
 * Checks the mass-threshold certificate for global existence: mass below
 * 2*pi (or at it with the momentum/energy side conditions) guarantees the
 * flow stays bounded, and a ladder search produces a speed placing the
 * field in K+ at borderline parameters.
 *
 * # Safety
 *
 * `field` must be a live handle, and `out` must be valid for writing one
 * `DnlsCertificate`.
 */
DnlsStatus dnls_certify(const DnlsField *field, DnlsCertificate *out);

/**
 * Minimizes the action over the constraint manifold {K = 0} on a fresh grid
 * of `n_points` samples covering [-half_width, half_width), approximating
 * the variational threshold at (omega, c).  `summary` receives the scalar
 * outcome; `minimizer`, when non-null, receives the minimizing field as a
 * new caller-owned handle.
 *
 * # Safety
 *
 * `summary` must be valid for writing one `DnlsMinimizeSummary`;
 * `minimizer`, when non-null, must be valid for writing one pointer.
 */
DnlsStatus dnls_minimize_threshold(double omega,
                                   double c,
                                   size_t n_points,
                                   double half_width,
                                   DnlsMinimizeSummary *summary,
                                   DnlsField **minimizer);

/**
 * Advances `initial` with the integrating-factor RK4 pseudo-spectral
 * stepper: round(t_end/dt) steps of exactly `dt` under the chosen equation
 * form (`DNLS_FORM_U` or `DNLS_FORM_V`), optionally dealiasing nonlinear
 * products by the 2/3 rule.
 *
 * `drift`, when non-null, receives the worst relative drift of mass,
 * momentum, and energy over every step, with the functionals evaluated at
 * (omega, c).  `final_field`, when non-null, receives the state at t_end as
 * a new caller-owned handle.
 *
 * # Safety
 *
 * `initial` must be a live handle; `drift` and `final_field`, when
 * non-null, must be valid for writing one `DnlsDriftSummary` and one
 * pointer respectively.
 */
DnlsStatus dnls_evolve(const DnlsField *initial,
                       double omega,
                       double c,
                       double t_end,
                       double dt,
                       bool dealias,
                       int form,
                       DnlsDriftSummary *drift,
                       DnlsField **final_field);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DNLS_LAB_H */
