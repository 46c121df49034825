//! Acceptance suite: one test per shipping criterion.
//!
//! Each test prints a single `criterion NN PASS/FAIL — …` line with the
//! measured numbers next to the gate it was judged against, then asserts.
//! Run with `--nocapture` to see the lines for passing tests:
//!
//! ```text
//! cargo test --test acceptance -- --nocapture
//! ```
//!
//! Tolerances and grids are pinned in code on purpose; they are part of the
//! contract, not knobs.  The two wide-box critical-pair tests allocate a
//! 2²²-point grid (≈ 320 MB transient) and take a couple of seconds each;
//! everything else is sub-second.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dnls_lab::classify::{
    certify_global, classify, k_lower_bound, soliton_action_level, ClassSet, Condition,
};
use dnls_lab::evolve::{
    convergence_study, evolve, observed_order, EquationForm, EvolutionConfig, ReferenceSolution,
};
use dnls_lab::functionals::{mass, shifted_derivative_sq, FunctionalReport};
use dnls_lab::gauge::{to_u_form, to_v_form};
use dnls_lab::grid::{l2_distance, norms, Field, GridSpec};
use dnls_lab::soliton::{
    residual_quasilinear, residual_semilinear, soliton_mass, traveling_wave, varphi_profile,
    SolitonSpec,
};
use dnls_lab::variational::{minimize_threshold, MinimizeOptions};
use dnls_lab::{Complex64, Params};

// ---------------------------------------------------------------------------
// Pinned configuration
// ---------------------------------------------------------------------------

/// The four open-regime parameter pairs every battery runs over.
const SUBCRITICAL_BATTERY: [(f64, f64); 4] = [(1.0, 0.0), (1.0, 1.0), (1.0, -1.0), (2.0, 1.0)];

/// The borderline pair of the battery.
const CRITICAL_PAIR: (f64, f64) = (1.0, 2.0);

/// Default production grid.
const DEFAULT_N: usize = 4096;
const DEFAULT_L: f64 = 40.0;

/// Wide box for the borderline profile, whose `1/|x|` tail and `e^{icx}`
/// carrier both need room: the half-width is an integer multiple of π so the
/// carrier is exactly periodic, and 2²² points keep the core resolved.
const CRITICAL_N: usize = 1 << 22;
const CRITICAL_L: f64 = 33379.0 * PI;

/// Smaller carrier-periodic box on which the borderline minimization runs.
const CRITICAL_MINIMIZE_N: usize = 4096;
const CRITICAL_MINIMIZE_L: f64 = 13.0 * PI;

fn grid(n: usize, l: f64) -> Arc<GridSpec> {
    GridSpec::new(n, l).expect("pinned grids are valid")
}

fn params(pair: (f64, f64)) -> Params {
    Params::new(pair.0, pair.1)
}

fn sampled_soliton(pair: (f64, f64), g: &Arc<GridSpec>) -> Field {
    let spec = SolitonSpec::centered(params(pair)).expect("battery pairs bear solitons");
    varphi_profile(&spec, g).expect("profile samples are finite")
}

/// Prints the per-criterion verdict line, then enforces it.
fn report(number: u32, pass: bool, detail: &str) {
    println!(
        "criterion {number:02} {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number:02} failed: {detail}");
}

/// A smooth random periodic field: thirteen low Fourier modes with
/// `1/(1+m²)`-damped complex Gaussian-ish coefficients, rescaled so the mass
/// `M = ½∫|f|²` hits `target_mass` exactly.
fn random_field(g: &Arc<GridSpec>, rng: &mut ChaCha8Rng, target_mass: f64) -> Field {
    let l = g.half_width;
    let modes: Vec<(i32, Complex64)> = (-6..=6)
        .map(|m| {
            let re = rng.gen_range(-1.0..1.0);
            let im = rng.gen_range(-1.0..1.0);
            (m, Complex64::new(re, im) / (1.0 + (m * m) as f64))
        })
        .collect();
    let f = Field::from_fn(g, |x| {
        modes
            .iter()
            .map(|&(m, a)| a * Complex64::from_polar(1.0, PI * m as f64 * x / l))
            .sum()
    })
    .expect("mode sums are finite");
    let current = 0.5 * norms(&f).l2_sq;
    let scale = (target_mass / current).sqrt();
    f.map(|v| v * scale)
}

/// Relative L² distance between `u` and `target` minimized over all cyclic
/// translations and the global phase (the phase is optimized in closed form
/// per shift; the shift is exhausted).
fn aligned_l2_gap(u: &Field, target: &Field) -> f64 {
    assert!(u.grid.same_layout(&target.grid));
    let n = u.grid.n_points;
    let h = u.grid.spacing;
    let u_sq = norms(u).l2_sq;
    let t_sq = norms(target).l2_sq;
    let mut best = f64::INFINITY;
    for shift in 0..n {
        let mut corr = Complex64::new(0.0, 0.0);
        for j in 0..n {
            corr += u.values[(j + n - shift) % n] * target.values[j].conj();
        }
        let dist_sq = u_sq + t_sq - 2.0 * h * corr.norm();
        if dist_sq < best {
            best = dist_sq;
        }
    }
    best.max(0.0).sqrt() / t_sq.sqrt()
}

// ---------------------------------------------------------------------------
// 1 — both stationary-equation residuals on the whole battery
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_soliton_residuals() {
    const GATE: f64 = 1e-8;
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    let base = grid(DEFAULT_N, DEFAULT_L);
    for &pair in SUBCRITICAL_BATTERY
        .iter()
        .chain(std::iter::once(&CRITICAL_PAIR))
    {
        let g = if pair == CRITICAL_PAIR {
            grid(CRITICAL_N, CRITICAL_L)
        } else {
            Arc::clone(&base)
        };
        let f = sampled_soliton(pair, &g);
        let semi = residual_semilinear(&f, params(pair));
        let quasi = residual_quasilinear(&f, params(pair));
        worst = worst.max(semi).max(quasi);
        detail.push_str(&format!(
            "({},{}) {:.2e}/{:.2e}; ",
            pair.0, pair.1, semi, quasi
        ));
    }
    report(
        1,
        worst < GATE,
        &format!("residuals {detail}worst {worst:.3e} (gate {GATE:.0e})"),
    );
}

// ---------------------------------------------------------------------------
// 2 — closed-form mass against quadrature, with both monotone limits
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_mass_formula_and_limits() {
    const GATE: f64 = 1e-6;
    let g = grid(DEFAULT_N, DEFAULT_L);
    let mut worst: f64 = 0.0;
    for &pair in &SUBCRITICAL_BATTERY {
        let quadrature = norms(&sampled_soliton(pair, &g)).l2_sq;
        let formula = soliton_mass(params(pair)).expect("open-regime battery");
        worst = worst.max((quadrature - formula).abs());
        if pair == (1.0, 0.0) {
            worst = worst.max((quadrature - 2.0 * PI).abs());
        }
    }

    // Ten-point paths at ω = 1: quadrature masses must approach the two limit
    // values 4π (c ↑ 2) and 0 (c ↓ −2) strictly monotonically — an ordering
    // check, deliberately without a numeric tolerance.
    let upper: Vec<f64> = (0..10)
        .map(|i| {
            let c = 1.80 + 0.02 * i as f64;
            norms(&sampled_soliton((1.0, c), &g)).l2_sq
        })
        .collect();
    let lower: Vec<f64> = (0..10)
        .map(|i| {
            let c = -1.80 - 0.02 * i as f64;
            norms(&sampled_soliton((1.0, c), &g)).l2_sq
        })
        .collect();
    let upper_monotone = upper
        .windows(2)
        .all(|w| (4.0 * PI - w[1]).abs() < (4.0 * PI - w[0]).abs());
    let lower_monotone = lower.windows(2).all(|w| w[1].abs() < w[0].abs());

    report(
        2,
        worst < GATE && upper_monotone && lower_monotone,
        &format!(
            "battery |quadrature − formula| worst {worst:.3e} (gate {GATE:.0e}); \
             10-point approach to 4π monotone: {upper_monotone} \
             (last {:.6}), to 0 monotone: {lower_monotone} (last {:.6})",
            upper[9], lower[9]
        ),
    );
}

// ---------------------------------------------------------------------------
// 3 — energy signs across the three reference pairs
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_energy_signs() {
    const ZERO_GATE: f64 = 1e-8;
    let g = grid(DEFAULT_N, DEFAULT_L);
    let energy_at = |pair: (f64, f64)| {
        FunctionalReport::evaluate(&sampled_soliton(pair, &g), params(pair))
            .expect("battery pairs evaluate")
            .energy
    };
    let e_zero = energy_at((1.0, 0.0));
    let e_neg = energy_at((1.0, 1.0));
    let e_pos = energy_at((1.0, -1.0));
    report(
        3,
        e_zero.abs() < ZERO_GATE && e_neg < 0.0 && e_pos > 0.0,
        &format!(
            "E(1,0) = {e_zero:.3e} (gate {ZERO_GATE:.0e}), \
             E(1,1) = {e_neg:.6} < 0, E(1,−1) = {e_pos:.6} > 0"
        ),
    );
}

// ---------------------------------------------------------------------------
// 4 — the constraint functional vanishes on every sampled soliton
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_nehari_identity() {
    const GATE: f64 = 1e-6;
    let mut worst: f64 = 0.0;
    let base = grid(DEFAULT_N, DEFAULT_L);
    for &pair in SUBCRITICAL_BATTERY
        .iter()
        .chain(std::iter::once(&CRITICAL_PAIR))
    {
        let g = if pair == CRITICAL_PAIR {
            grid(CRITICAL_N, CRITICAL_L)
        } else {
            Arc::clone(&base)
        };
        let f = sampled_soliton(pair, &g);
        let k = FunctionalReport::evaluate(&f, params(pair))
            .expect("battery pairs evaluate")
            .nehari;
        worst = worst.max(k.abs());
    }
    report(
        4,
        worst < GATE,
        &format!("worst |K(varphi)| {worst:.3e} over the battery (gate {GATE:.0e})"),
    );
}

// ---------------------------------------------------------------------------
// 5 — the constrained minimization reproduces the threshold and the profile
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_threshold_reproduction() {
    const J_GATE_OPEN: f64 = 0.01;
    const J_GATE_BORDER: f64 = 0.02;
    const ALIGN_GATE: f64 = 1e-2;
    const BUDGET_SECS: f64 = 300.0;

    let mut pass = true;
    let mut detail = String::new();
    for (pair, n, l, j_gate) in [
        ((1.0, 0.0), 1024, 20.0, J_GATE_OPEN),
        ((1.0, 1.0), 1024, 20.0, J_GATE_OPEN),
        (CRITICAL_PAIR, CRITICAL_MINIMIZE_N, CRITICAL_MINIMIZE_L, J_GATE_BORDER),
    ] {
        let g = grid(n, l);
        let start = Instant::now();
        let result = minimize_threshold(params(pair), &MinimizeOptions::new(Arc::clone(&g)))
            .expect("minimization runs on soliton-bearing pairs");
        let elapsed = start.elapsed().as_secs_f64();
        let threshold = soliton_action_level(params(pair)).expect("battery threshold");
        let j_gap = (result.j_value - threshold).abs() / threshold;
        let align = aligned_l2_gap(&result.minimizer, &sampled_soliton(pair, &g));
        let ok = j_gap <= j_gate
            && align <= ALIGN_GATE
            && elapsed < BUDGET_SECS
            && result.converged;
        pass &= ok;
        detail.push_str(&format!(
            "({},{}) j-gap {:.2e}/{:.0e}, align {:.2e}/{ALIGN_GATE:.0e}, {:.2}s; ",
            pair.0, pair.1, j_gap, j_gate, align, elapsed
        ));
    }
    report(5, pass, detail.trim_end_matches("; "));
}

// ---------------------------------------------------------------------------
// 6 — functional identities on a hundred random fields
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_functional_identities() {
    const GATE: f64 = 1e-10;
    let g = grid(512, 15.0);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        // Half the draws land strictly inside the open regime, half exactly on
        // the borderline (ω = c²/4 is exact in floating point).
        let (p, divisor) = if i % 2 == 0 {
            let omega: f64 = rng.gen_range(0.5..2.5);
            let c_max = 2.0 * omega.sqrt();
            (
                Params::new(omega, rng.gen_range(-0.9 * c_max..0.9 * c_max)),
                4.0,
            )
        } else {
            let c = rng.gen_range(0.5..3.0);
            (Params::new(c * c / 4.0, c), 6.0)
        };
        let target_mass = rng.gen_range(0.3..3.0);
        let f = random_field(&g, &mut rng, target_mass);
        let r = FunctionalReport::evaluate(&f, p).expect("soliton-bearing draws");
        let scale = r.action.abs().max(r.nehari.abs()).max(1.0);

        let j_defect = (r.action - (r.energy + p.omega * r.mass + p.c * r.momentum)).abs();
        let k_defect = (r.nehari - (r.quadratic_part - r.nonlinear_part)).abs();
        let h_defect = (r.positive_part - (r.action - r.nehari / divisor)).abs();
        let sigma = p.omega - p.c * p.c / 4.0;
        let square = shifted_derivative_sq(&f, p.c)
            + sigma * norms(&f).l2_sq
            + if divisor == 6.0 {
                0.5 * p.c * norms(&f).l4_4
            } else {
                0.0
            };
        let kq_defect = (r.quadratic_part - square).abs();

        assert!(r.positive_part >= 0.0, "H must be nonnegative, draw {i}");
        worst = worst
            .max(j_defect / scale)
            .max(k_defect / scale)
            .max(h_defect / scale)
            .max(kq_defect / scale);
    }
    report(
        6,
        worst < GATE,
        &format!(
            "worst relative defect {worst:.3e} over 100 fields × \
             {{J, K-split, H-relation, completed-square}} (gate {GATE:.0e}); H ≥ 0 held"
        ),
    );
}

// ---------------------------------------------------------------------------
// 7 — the lower bound for K on randomized members of the bounded set
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_k_lower_bound() {
    let g = grid(1024, 20.0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let battery: Vec<(f64, f64)> = SUBCRITICAL_BATTERY
        .iter()
        .copied()
        .chain(std::iter::once(CRITICAL_PAIR))
        .collect();
    let mut min_margin = f64::INFINITY;
    for i in 0..100 {
        let p = params(battery[i % battery.len()]);
        let target_mass = rng.gen_range(0.05..0.6);
        let f = random_field(&g, &mut rng, target_mass);
        let verdict = classify(&f, p, None).expect("classification runs");
        assert_eq!(
            verdict.set,
            ClassSet::KPlus,
            "draw {i} must land in the bounded set (mass was rescaled small)"
        );
        let bound = k_lower_bound(&f, p, None).expect("bound evaluates on members");
        assert!(bound.holds, "draw {i}: K = {} < bound {}", bound.lhs, bound.rhs);
        min_margin = min_margin.min(bound.lhs - bound.rhs);
    }
    report(
        7,
        min_margin > -1e-10,
        &format!("bound held on 100 randomized members; smallest K − bound = {min_margin:.3e}"),
    );
}

// ---------------------------------------------------------------------------
// 8 — the bounded set is preserved by the flow, with conserved quantities
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_flow_invariance_of_kplus() {
    const MASS_GATE: f64 = 1e-8;
    const MOMENTUM_GATE: f64 = 1e-7;
    const ENERGY_GATE: f64 = 1e-7;

    let p = Params::new(1.0, 1.0);
    let g = grid(1024, 20.0);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut config = EvolutionConfig::new(1.0, 2e-3).expect("valid config");
    config.snapshot_stride = 50;

    let mut all_kplus = true;
    let mut worst = (0.0_f64, 0.0_f64, 0.0_f64);
    for i in 0..10 {
        let u0 = random_field(&g, &mut rng, 0.3);
        assert_eq!(
            classify(&u0, p, None).expect("classification runs").set,
            ClassSet::KPlus,
            "datum {i} must start in the bounded set"
        );
        let trace = evolve(&u0, &config, p).expect("small data evolve to t = 1");
        for snapshot in &trace.snapshots {
            all_kplus &= classify(snapshot, p, None).expect("classification runs").set
                == ClassSet::KPlus;
        }
        worst.0 = worst.0.max(trace.max_drift.mass);
        worst.1 = worst.1.max(trace.max_drift.momentum);
        worst.2 = worst.2.max(trace.max_drift.energy);
    }
    report(
        8,
        all_kplus && worst.0 < MASS_GATE && worst.1 < MOMENTUM_GATE && worst.2 < ENERGY_GATE,
        &format!(
            "10 data to t = 1: every snapshot in the bounded set: {all_kplus}; worst relative \
             drift M {:.2e} (gate {MASS_GATE:.0e}), P {:.2e} (gate {MOMENTUM_GATE:.0e}), \
             E {:.2e} (gate {ENERGY_GATE:.0e})",
            worst.0, worst.1, worst.2
        ),
    );
}

// ---------------------------------------------------------------------------
// 9 — soliton transport accuracy and observed temporal order
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_traveling_wave_propagation() {
    const ERROR_GATE: f64 = 1e-4;
    const ORDER_GATE: f64 = 3.5;

    let p = Params::new(1.0, 1.0);
    let spec = SolitonSpec::centered(p).expect("open pair");
    let g = grid(2048, 30.0);
    let u0 = varphi_profile(&spec, &g).expect("profile samples");

    let mut config = EvolutionConfig::new(1.0, 2e-3).expect("valid config");
    config.snapshot_stride = usize::MAX;
    let trace = evolve(&u0, &config, p).expect("soliton evolves to t = 1");
    let exact = traveling_wave(&spec, &g, 1.0).expect("exact wave samples");
    let error = l2_distance(trace.snapshots.last().expect("final snapshot"), &exact);

    let rows = convergence_study(&u0, 1.0, 4e-3, 3, &ReferenceSolution::TravelingWave(spec))
        .expect("three-level study");
    let order = observed_order(&rows);

    report(
        9,
        error < ERROR_GATE && order >= ORDER_GATE,
        &format!(
            "L² error vs exact wave at t = 1: {error:.3e} (gate {ERROR_GATE:.0e}); \
             observed order {order:.2} over dt = 4e-3/2e-3/1e-3 (gate ≥ {ORDER_GATE})"
        ),
    );
}

// ---------------------------------------------------------------------------
// 10 — the two equation forms agree through the gauge map
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_gauge_consistency() {
    const CROSS_GATE: f64 = 1e-3;
    const ROUND_TRIP_GATE: f64 = 1e-10;
    const MASS_GATE: f64 = 1e-13;

    let p = Params::new(1.0, 1.0);
    let g = grid(DEFAULT_N, DEFAULT_L);
    let u0 = sampled_soliton((1.0, 1.0), &g);

    let round_trip = l2_distance(&to_u_form(&to_v_form(&u0)), &u0);

    let m0 = mass(&u0);
    let v0 = to_v_form(&u0);
    let mass_gap_forward = (mass(&v0) - m0).abs() / m0;

    let mut config = EvolutionConfig::new(1.0, 1e-3).expect("valid config");
    config.snapshot_stride = usize::MAX;
    let u_end = evolve(&u0, &config, p)
        .expect("gauged form evolves")
        .snapshots
        .pop()
        .expect("final snapshot");
    let mut config_v = config.clone();
    config_v.equation_form = EquationForm::VForm;
    let v_end = evolve(&v0, &config_v, p)
        .expect("divergence form evolves")
        .snapshots
        .pop()
        .expect("final snapshot");
    let back = to_u_form(&v_end);
    let cross = l2_distance(&back, &u_end);
    let mass_gap_back = (mass(&back) - mass(&v_end)).abs() / m0;
    let worst_mass_gap = mass_gap_forward.max(mass_gap_back);

    report(
        10,
        cross < CROSS_GATE && round_trip < ROUND_TRIP_GATE && worst_mass_gap < MASS_GATE,
        &format!(
            "forms agree at t = 1 within {cross:.3e} (gate {CROSS_GATE:.0e}); \
             round trip {round_trip:.3e} (gate {ROUND_TRIP_GATE:.0e}); \
             gauge mass change {worst_mass_gap:.3e} relative (gate {MASS_GATE:.0e})"
        ),
    );
}

// ---------------------------------------------------------------------------
// 11 — certificates for twenty random sub-threshold fields, with soundness
// ---------------------------------------------------------------------------

#[test]
fn criterion_11_global_existence_certificates() {
    let g = grid(1024, 20.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let two_pi = 2.0 * PI;
    let mut smallest_c = f64::INFINITY;
    let mut largest_c: f64 = 0.0;
    for i in 0..20 {
        // Masses sweep log-uniformly from the tiny-data class up to 95% of
        // the certificate's mass ceiling.
        let fraction = (i as f64) / 19.0;
        let target_mass = 1e-3 * (0.95 * two_pi / 1e-3_f64).powf(fraction);
        let f = random_field(&g, &mut rng, target_mass);
        assert!(mass(&f) < two_pi, "draw {i} must sit below the mass ceiling");

        let certificate = certify_global(&f);
        assert_eq!(
            certificate.condition_met,
            Condition::MassBelow2Pi,
            "draw {i} satisfies the mass clause"
        );
        let c = certificate
            .admissible_c
            .unwrap_or_else(|| panic!("draw {i}: no admissible speed found"));
        let border = certificate
            .kplus_params
            .unwrap_or_else(|| panic!("draw {i}: certificate lacks its parameter pair"));

        // Soundness re-check, independently of whatever the search recorded:
        // the parameters are exactly borderline with that speed, and the field
        // classifies into the bounded set there.
        assert_eq!(border.c, c, "draw {i}: parameter pair uses the found speed");
        assert_eq!(
            4.0 * border.omega,
            c * c,
            "draw {i}: parameter pair sits exactly on the borderline"
        );
        let verdict = classify(&f, border, None).expect("classification runs");
        assert_eq!(
            verdict.set,
            ClassSet::KPlus,
            "draw {i}: field re-classifies into the bounded set at ({}, {})",
            border.omega,
            border.c
        );
        smallest_c = smallest_c.min(c);
        largest_c = largest_c.max(c);
    }
    report(
        11,
        true,
        &format!(
            "20 sub-ceiling fields certified with admissible speeds in \
             [{smallest_c}, {largest_c}]; soundness re-check passed on all 20"
        ),
    );
}
