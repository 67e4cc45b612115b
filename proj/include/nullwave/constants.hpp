#pragma once

// Central registry of numeric tolerances and calibrated constants.
// Every comparison threshold used by the verification suites lives here,
// so thresholds are auditable in one place.  `nullwave --help` prints this
// table.  Calibrated entries carry the grid they were calibrated on.

namespace nullwave::tol {

// --- exact-arithmetic and roundoff-level checks -----------------------------

// Agreement between the radial exterior stepper and the method-of-images
// oracle at node points on linear runs.  The stepper is exact for the
// homogeneous half-line problem at unit Courant number, so this bound is
// pure roundoff accumulation.
inline constexpr double images_node_agreement = 1e-12;

// Relative drift of the conserved discrete energy on linear radial runs.
inline constexpr double energy_drift_rel = 1e-10;

// Discrete commutator [Z, box_c] on cubic polynomial fields.  Centered
// differences reproduce every operator in the identity exactly on cubics,
// so the residual is roundoff against the field magnitude.
inline constexpr double commutator_cubic_abs = 1e-10;

// Scale invariance of the Klainerman-Sobolev ratio under u -> alpha*u.
inline constexpr double ks_scale_invariance_rel = 1e-10;

// Convergence order of the centered-lattice radial-tangential realization
// of Q0 against the analytic form (Richardson pair h, h/2); 2 expected.
inline constexpr double q0_identity_min_order = 1.9;

// Sphere quadrature: sum of weights vs 4*pi, and exactness on harmonics
// up to the declared degree.
inline constexpr double sphere_weight_sum_abs = 1e-12;
inline constexpr double sphere_harmonic_exactness_abs = 1e-12;

// --- quadrature / solver accuracy targets -----------------------------------

// Kirchhoff evaluator vs the 1-d radial quadrature oracle, relative sup
// error over the probe set at default quadrature settings.
inline constexpr double kirchhoff_vs_radial_rel = 1e-6;

// Duhamel time quadrature: adaptive doubling stops when two successive
// node counts agree to this relative tolerance.
inline constexpr double duhamel_doubling_rel = 1e-8;

// Smooth 1-d profile integrals (initial-step quadrature, oracle integrals).
inline constexpr double profile_integral_rel = 1e-13;

// --- decomposition verifier -------------------------------------------------

// Composed-solver tolerance for the cut-off decomposition residual,
// calibrated on the default verification grid (dr = 0.02, speed 1, probes
// t <= 12, r <= 8): measured 4.3e-4 homogeneous / 1.7e-4 inhomogeneous,
// halving dr divides both by 4.  The acceptance gate allows 5x this value;
// the residual must also shrink under refinement.
inline constexpr double decomposition_residual_calibrated = 5e-4;
inline constexpr double decomposition_gate_factor = 5.0;

// Ray residual of the reduced radial identity D- D+ (r u) = r F on source
// free runs; roundoff because centered D- D+ annihilates sampled
// d'Alembert solutions at unit Courant number.
inline constexpr double dplus_identity_sourcefree_abs = 1e-10;

// With a smooth source the ray residual is O(dr^2); halving dr must shrink
// it by at least this factor (4 expected, slack for the asymptotic regime).
inline constexpr double dplus_refinement_min_ratio = 2.5;

// --- decay diagnostics ------------------------------------------------------

// Local energy fit: required sign and goodness of the exponential fit.
inline constexpr double local_decay_min_sigma = 0.0;
inline constexpr double local_decay_min_r2 = 0.9;

// Pointwise decay: admissible growth of the running sup over the second
// half of the run, as a fraction of its mid-run value.
inline constexpr double pointwise_sup_growth_frac = 0.10;

// Ray comparison: fitted exponent of the time-weighted outgoing-derivative
// series relative to the time-weighted gradient series.
inline constexpr double ray_relative_exponent_max = -0.8;

// Lifespan sweep: minimum correlation of log T against 1/epsilon, and the
// factor k in the survival bound sup|u| <= k*epsilon for null-form runs.
inline constexpr double lifespan_fit_min_r2 = 0.9;
inline constexpr double survival_amplitude_factor = 10.0;

// Klainerman-Sobolev: bound for the discrete ratio
// sup <|x|> |phi| / sum_{|a|<=2} ||Ztilde^a phi||_L2(Omega),
// calibrated over the built-in truncated-Gaussian family (ratios measured
// in [0.008, 0.015]); one constant with ~40% headroom covers all of them.
inline constexpr double ks_ratio_bound = 0.02;

// --- run control ------------------------------------------------------------

// Amplitude gate: a run is declared blown up when any |u_i| exceeds this
// or stops being finite.
inline constexpr double blowup_amplitude = 1e6;

}  // namespace nullwave::tol
