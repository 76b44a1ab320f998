// Heat-flow background in similarity variables, its solenoidal far-field
// part, and the small-data cell solver.

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "lprf/background.hpp"
#include "lprf/mild.hpp"
#include "lprf/spectral.hpp"
#include "lprf/symmetry.hpp"
#include "lprf/transform.hpp"

using namespace lprf;

namespace {

// Bounded swirl profile on the fundamental domain: at |x| = 1 the value is
// amp * rho * e_phi, so the extension decays like amp/|y| with magnitude
// bounded by amp on every shell.
FundamentalData swirl_data(const SymmetrySpec& spec, double amp, int nr = 1) {
  return FundamentalData::from_function(spec, 16, 16, nr, [amp](const Vec3& p) {
    return Vec3{-p.y, p.x, 0.0} * amp;
  });
}

}  // namespace

TEST_SUITE("linear") {
  TEST_CASE("continuously self-similar data gives an s-independent background") {
    const FundamentalData a0 = swirl_data(SymmetrySpec::ss(), 0.7);
    const BoxGrid g(32, 4.0);
    const ProfileTrajectory u0 = build_U0(a0, g, {0.0, 0.4, 1.1, 2.0});
    CHECK(steadiness_defect(u0) < 1e-8);
    CHECK(lp_norm(u0.velocity(0), 2.0) > 0.0);
  }

  TEST_CASE("rotating discretely self-similar data gives a T-periodic background") {
    const SymmetrySpec spec = SymmetrySpec::rdss(2.0, 0.6);
    const FundamentalData a0 = FundamentalData::from_function(
        spec, 12, 12, 4, [](const Vec3& p) {
          const double r = norm(p);
          return Vec3{-p.y, p.x, 0.3 * p.x} * ((1.0 + 0.4 * std::cos(2.0 * 3.14159265358979323846 *
                                                                     std::log2(r))) /
                                               r);
        });
    const BoxGrid g(32, 4.0);
    const double T = spec.period();
    const ProfileTrajectory u0 = build_U0(a0, g, {0.0, 0.31, T, T + 0.31});
    CHECK(relative_l2(u0.velocity(0), u0.velocity(2)) < 1e-10);
    CHECK(relative_l2(u0.velocity(1), u0.velocity(3)) < 1e-10);
    // genuinely unsteady inside the cell
    CHECK(relative_l2(u0.velocity(0), u0.velocity(1)) > 1e-3);
  }

  TEST_CASE("background profile equals the directly co-scaled physical heat flow") {
    const SymmetrySpec spec = SymmetrySpec::dss(2.0);
    const FundamentalData a0 = FundamentalData::from_function(
        spec, 12, 12, 3, [](const Vec3& p) {
          const double r = norm(p);
          return Vec3{p.x / r, -0.5 * p.z / r, 0.2} * (1.0 / r);
        });
    const BoxGrid yg(24, 3.0);
    const double s = 0.4;
    const double root_t = std::exp(0.5 * s);
    const ProfileTrajectory u0 = build_U0(a0, yg, {s});

    // same construction in physical variables: x-grid is the scaled y-grid
    const BoxGrid xg(24, root_t * 3.0);
    const VectorField v = heat_evolve(extend_from_fundamental_domain(a0, xg), root_t * root_t);
    VectorField expect(yg);
    for (int c = 0; c < 3; ++c)
      for (std::int64_t q = 0; q < v.size(); ++q) expect.at(c, q) = root_t * v.at(c, q);
    CHECK(relative_l2(u0.velocity(0), expect) < 1e-12);
  }

  TEST_CASE("local size table is finite and grows with the ball radius") {
    const FundamentalData a0 = swirl_data(SymmetrySpec::ss(), 1.0);
    const BoxGrid g(32, 4.0);
    const ProfileTrajectory u0 = build_U0(a0, g, {0.0, 0.5});
    const BackgroundSize bs = background_size(u0, 4.0);
    REQUIRE(bs.radii.size() == 3);
    CHECK(bs.finite);
    CHECK(bs.theta[0] > 0.0);
    CHECK(bs.theta[0] <= bs.theta[1]);
    CHECK(bs.theta[1] <= bs.theta[2]);
  }

  TEST_CASE("far-field part is exactly solenoidal and meets a generous bound") {
    const FundamentalData a0 = swirl_data(SymmetrySpec::ss(), 0.1);
    const BoxGrid g(32, 4.0);
    const ProfileTrajectory u0 = build_U0(a0, g, {0.0, 0.6});
    const BackgroundResult br = build_W(u0, 0.5, 4.0);
    CHECK(br.reached);
    CHECK(br.r0 == 0.0);  // small data needs no cutoff at all
    CHECK(br.achieved <= 0.5);
    CHECK(br.max_divergence < 1e-10);
    CHECK(br.w.n_nodes() == u0.n_nodes());
  }

  TEST_CASE("cutoff ladder walks outward until the norm bound is met") {
    const FundamentalData a0 = swirl_data(SymmetrySpec::ss(), 1.0);
    const BoxGrid g(32, 4.0);
    const ProfileTrajectory u0 = build_U0(a0, g, {0.0});
    // measure the rungs first, then target between them
    const double at0 = build_W(u0, 1e9, 4.0, {0.0}).achieved;
    const double at15 = build_W(u0, 1e9, 4.0, {1.5}).achieved;
    REQUIRE(at15 < at0);
    const BackgroundResult br = build_W(u0, 0.5 * (at0 + at15), 4.0, {0.0, 1.5});
    CHECK(br.reached);
    CHECK(br.r0 == 1.5);
    CHECK(br.achieved == doctest::Approx(at15).epsilon(1e-12));
    CHECK(br.max_divergence < 1e-10);
  }

  TEST_CASE("an oversized background reports the best rung without reaching") {
    const FundamentalData a0 = swirl_data(SymmetrySpec::ss(), 50.0);
    const BoxGrid g(32, 4.0);
    const ProfileTrajectory u0 = build_U0(a0, g, {0.0});
    const BackgroundResult br = build_W(u0, 0.25, 4.0);
    CHECK(!br.reached);
    CHECK(br.achieved > 0.25);
    CHECK(br.max_divergence < 1e-9);
    CHECK(!br.w.empty());
    CHECK_THROWS_AS(build_W(u0, -1.0, 4.0), std::invalid_argument);
  }

  TEST_CASE("zero data yields the zero mild solution immediately") {
    const SymmetrySpec spec = SymmetrySpec::dss(2.0);
    const FundamentalData b0 =
        FundamentalData::from_function(spec, 6, 6, 2, [](const Vec3&) { return Vec3{}; });
    MildParams prm;
    prm.n_times = 4;
    prm.panels = 2;
    const MildResult mr = solve_mild_cell(b0, BoxGrid(16, 4.0), BoxGrid(16, 2.0), prm);
    CHECK(mr.converged);
    CHECK(mr.iterations == 1);
    for (int i = 0; i < mr.b.n_slices(); ++i) CHECK(lp_norm(mr.b.slice(i).values, 2.0) == 0.0);
  }

  TEST_CASE("nonlinear correction scales quadratically with the data size") {
    const SymmetrySpec spec = SymmetrySpec::dss(2.0);
    MildParams prm;
    prm.n_times = 5;
    prm.panels = 2;
    prm.max_iterations = 12;
    const BoxGrid box(24, 4.0), pg(24, 2.0);
    // The map data -> solution is linear plus a quadratically small rest, so
    // b(2a) - 2 b(a) isolates the rest and doubling a again multiplies it by
    // four. This needs no reference solution and cancels every linear term.
    VectorField sol[3] = {VectorField(box), VectorField(box), VectorField(box)};
    const double amps[3] = {0.01, 0.02, 0.04};
    for (int c = 0; c < 3; ++c) {
      const FundamentalData b0 = FundamentalData::from_function(
          spec, 10, 10, 3, [&](const Vec3& p) {
            return Vec3{-p.y, p.x, 0.0} * (amps[c] / norm2(p));
          });
      const MildResult mr = solve_mild_cell(b0, box, pg, prm);
      REQUIRE(mr.converged);
      CHECK(mr.contraction < 0.5);
      sol[c] = mr.b.slice(2).values;
    }
    VectorField d1 = sol[1];
    d1.axpy(-2.0, sol[0]);
    VectorField d2 = sol[2];
    d2.axpy(-2.0, sol[1]);
    const double q1 = lp_norm(d1, 2.0);
    const double q2 = lp_norm(d2, 2.0);
    REQUIRE(q1 > 0.0);
    const double ratio = q2 / q1;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
  }

  TEST_CASE("steady data produces the exact similarity decay of cell norms") {
    const SymmetrySpec spec = SymmetrySpec::ss();
    const FundamentalData b0 = swirl_data(spec, 0.05);
    MildParams prm;
    prm.n_times = 6;
    prm.panels = 2;
    const BoxGrid box(24, 4.0), pg(24, 2.0);
    const MildResult mr = solve_mild_cell(b0, box, pg, prm);
    REQUIRE(mr.converged);
    CHECK(mr.decay_target == doctest::Approx(-0.5 + 1.5 / 4.0));
    CHECK(std::abs(mr.decay_rate - mr.decay_target) < 0.05);
    CHECK(steadiness_defect(mr.profile) < 0.05);
    CHECK(mr.profile.has_pressure());
    CHECK(mr.b.has_pressure());
  }
}
