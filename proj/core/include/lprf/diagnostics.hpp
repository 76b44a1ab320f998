// Verification diagnostics: global and local energy inequalities, the local
// a priori bound of the solution class, and convergence-rate fits.
//
// All inequality checks report slack = rhs - lhs; nonnegative slack means
// the inequality holds for the given test function. Nothing here asserts:
// callers decide what a violation means (self-similar solutions have
// infinite global energy, so the global check is informational for them).

#ifndef LPRF_DIAGNOSTICS_H
#define LPRF_DIAGNOSTICS_H

#include <functional>
#include <vector>

#include "lprf/field.hpp"
#include "lprf/physical_field.hpp"
#include "lprf/profile.hpp"

namespace lprf {

// Smooth nonnegative space-time test function with its exact derivatives.
// The same struct serves physical (x, t) and similarity (y, s) variables.
struct TestFunction {
  std::function<double(const Vec3&, double)> value;
  std::function<double(const Vec3&, double)> dt;   // time derivative
  std::function<Vec3(const Vec3&, double)> grad;   // spatial gradient
  std::function<double(const Vec3&, double)> lap;  // spatial laplacian
};

// Product bump: radial quintic smoothstep in space times the same profile in
// time. Identically 1 where both |x - center| <= radius/2 and
// |t - t_center| <= t_radius/2, identically 0 outside radius resp. t_radius,
// C2 across the joints so the derivatives the checks use are continuous.
struct BumpSpec {
  Vec3 center{};
  double radius = 1.0;
  double t_center = 1.0;
  double t_radius = 0.5;
};

TestFunction bump_test_function(const BumpSpec& spec);

// Fixed battery of 12 bumps, 3 scales x 4 centers, deterministic in the
// seed. Supports stay at least `margin` away from the faces of the cube of
// the given half width and strictly inside (t_lo, t_hi). margin <= 0 selects
// 8% of the half width; callers on coarse grids should pass at least one
// lattice spacing so no support reaches the outermost node layer.
std::vector<BumpSpec> bump_battery(double half_width, double t_lo, double t_hi,
                                   unsigned seed = 12, double margin = 0.0);

struct LocalEnergyTestCase {
  BumpSpec bump{};     // geometry when built from a bump; zeroed otherwise
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
};

// Local energy inequality of v with its pressure, assembled by lattice
// quadrature in space and trapezoidal quadrature over the stored slices:
//   2 iint |grad v|^2 phi <= iint |v|^2 (dt phi + lap phi)
//                            + iint (|v|^2 + 2 pi) v . grad phi.
// A nonnull perturbation g switches the flux and adds the coupling term:
//   rhs = iint |v|^2 (dt phi + lap phi)
//         + iint (|v|^2 (v + g) + 2 pi v) . grad phi
//         - 2 iint (v . grad g) . v phi,
// with g's slices matched to v's times (g may live on its own frames; it is
// sampled where phi is active). Errors: v without pressure, phi's support
// touching a slice's lattice boundary, phi nonzero at the first or last
// stored time, or a missing matching g slice.
LocalEnergyTestCase local_energy_check(const PhysicalField& v, const TestFunction& phi,
                                       const PhysicalField* perturbation = nullptr);

// Similarity-variable variant for a profile A with pressure, including the
// scaling terms and an optional background coupling B:
//   iint (2 |grad A|^2 + |A|^2 / 2) psi
//     <= iint |A|^2 (ds psi + lap psi)
//        + iint (|A|^2 [A + B - y/2] + 2 p_A A) . grad psi
//        - 2 iint (A . grad B) . (A psi).
// s-quadrature: n_quad uniform trapezoid points on [s_lo, s_hi] with the
// trajectory's own interpolation (a single-node trajectory is stationary;
// periodic trajectories wrap). psi must vanish at s_lo and s_hi and inside
// the lattice boundary.
LocalEnergyTestCase local_energy_check_profile(const ProfileTrajectory& A,
                                               const TestFunction& psi, double s_lo,
                                               double s_hi, int n_quad = 33,
                                               const ProfileTrajectory* background = nullptr);

// Battery evaluation. Spectral preparation (FFT plans are not reentrant)
// runs once up front; per-bump assembly is pure arithmetic and fans out over
// worker threads when threads > 1. Results are indexed like the bumps, so
// the aggregation is deterministic regardless of scheduling.
std::vector<LocalEnergyTestCase> local_energy_battery(const PhysicalField& v,
                                                      const std::vector<BumpSpec>& bumps,
                                                      const PhysicalField* perturbation = nullptr,
                                                      int threads = 1);

// Global energy slack over the stored range,
//   slack = ||v0||_2^2 - max_i (||v(t_i)||_2^2 + integral_{t_0}^{t_i} 2 ||grad v||_2^2 dt),
// with v0 the data at the start of the range. The combined quantity is
// conserved by the pure heat flow, so the slack vanishes there up to
// quadrature error; it is >= 0 for flows that dissipate energy and negative
// for flows that gain it. Report only, no pass/fail.
double global_energy_check(const PhysicalField& v, const VectorField& v0);

// Local a priori bound report at radius r: the data constant
//   A_r = sup_x0 integral_{B_r(x0)} |v0|^2 / 2,
// the horizon sigma(r) r^2 with sigma = c0 min{r^2 A_r^{-2}, 1}, and the
// measured left side
//   sup_{t <= sigma r^2} sup_x0 integral_{B_r(x0)} |v|^2 / 2
//   + sup_x0 integral_0^{sigma r^2} integral_{B_r(x0)} |grad v|^2.
// The center supremum is discretized over a strided physical lattice (the
// stride caps the work and is recorded in the report). ratio = measured/A_r
// is the dimensionless quantity to track across r; no pass/fail because the
// universal constant is unknown.
struct AprioriBoundReport {
  double r = 0.0;
  double c0 = 0.0;
  double a_r = 0.0;
  double sigma = 0.0;
  double horizon = 0.0;    // sigma * r^2
  double measured = 0.0;   // left side over the covered horizon
  double ratio = 0.0;      // measured / a_r, 0 when a_r = 0
  int center_stride = 1;   // lattice stride of the discretized center sup
  bool truncated = false;  // stored slices end before the horizon
};

AprioriBoundReport apriori_bound_check(const PhysicalField& v, const VectorField& v0,
                                       double r, double c0 = 1.0 / 128.0);

// Log-log least-squares fit norms ~ amplitude * t^exponent. Requires at
// least 6 samples spanning t_max / t_min >= 30. Samples below the 1e-14
// floor are excluded; if fewer than 6 survive the fit is inconclusive (no
// pass/fail). One-sided pass: decay bounds are upper bounds, so any
// exponent >= target - tolerance passes.
struct RateFit {
  std::vector<double> times;
  std::vector<double> norms;
  double exponent = 0.0;
  double amplitude = 0.0;
  double target = 0.0;
  double tolerance = 0.05;
  bool passed = false;
  bool inconclusive = false;
};

RateFit convergence_rate_fit(std::vector<double> times, std::vector<double> norms,
                             double target);

// Rate of ||v(t) - baseline(t)||_{L^p(B_r)} on the fixed ball of radius
// r_fix (auto: the largest ball sampleable on every used slice of both
// fields). Uses the slices of v that fall inside baseline's stored range.
RateFit difference_rate_fit(const PhysicalField& v, const PhysicalField& baseline, double p,
                            double target, double r_fix = 0.0);

}  // namespace lprf

#endif
