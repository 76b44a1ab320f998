// Symmetry classes, fundamental-domain extension, and defect measurement.

#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "lprf/symmetry.hpp"

using namespace lprf;

namespace {
Vec3 inverse_square_data(const Vec3& x) { return x / norm2(x); }
}  // namespace

TEST_SUITE("symmetry") {
  TEST_CASE("period and per-cell angle follow the scale factor") {
    const SymmetrySpec dss = SymmetrySpec::dss(2.0);
    CHECK(dss.period() == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
    const SymmetrySpec rss = SymmetrySpec::rss(0.7, 3.0);
    CHECK(rss.phi() == doctest::Approx(2.0 * 0.7 * std::log(3.0)).epsilon(1e-15));
    const SymmetrySpec rdss = SymmetrySpec::rdss(2.0, 1.3);
    CHECK(rdss.phi() == doctest::Approx(1.3).epsilon(1e-15));
    CHECK_THROWS_AS(SymmetrySpec::dss(1.0), std::invalid_argument);
    CHECK_THROWS_AS(SymmetrySpec::rdss(0.5, 0.1), std::invalid_argument);
  }

  TEST_CASE("scaling map is the identity at unit factor") {
    const BoxGrid g(16, 2.0);
    VectorField v(g);
    v.fill([](const Vec3& p) { return Vec3{p.y, -p.x, 0.3 * p.z}; });
    const VectorField w = apply_similarity_symmetry(v, 1.0, 0.0, g);
    CHECK(relative_l2(v, w) < 1e-14);
  }

  TEST_CASE("scaling map doubles twice on a linear field") {
    const BoxGrid g(32, 4.0);
    VectorField v(g);
    v.fill([](const Vec3& p) { return p; });
    const BoxGrid target(16, 1.5);
    const VectorField w = apply_similarity_symmetry(v, 2.0, 0.0, target);
    VectorField expect(target);
    expect.fill([](const Vec3& p) { return p * 4.0; });
    CHECK(relative_l2(expect, w) < 1e-13);
  }

  TEST_CASE("scaling maps compose factors and angles") {
    const BoxGrid g(32, 4.0);
    VectorField v(g);
    v.fill([](const Vec3& p) { return Vec3{std::sin(p.x), p.y * p.z, std::cos(p.y)}; });
    const BoxGrid target(12, 0.8);
    const BoxGrid mid(24, 2.0);
    const VectorField two_step = apply_similarity_symmetry(
        apply_similarity_symmetry(v, 1.5, 0.3, mid), 1.4, 0.2, target);
    const VectorField one_step = apply_similarity_symmetry(v, 1.5 * 1.4, 0.5, target);
    CHECK(relative_l2(one_step, two_step) < 2e-2);  // two interpolation layers
  }

  TEST_CASE("inverse-square data is scale invariant on aligned nodes") {
    const BoxGrid g(32, 4.0);
    VectorField v(g);
    v.fill([](const Vec3& p) {
      const double r2 = norm2(p);
      return r2 == 0.0 ? Vec3{} : p / r2;
    });
    CHECK(symmetry_defect(v, SymmetrySpec::ss(2.0)) < 1e-12);
  }

  TEST_CASE("wrong-homogeneity data has an order-one scaling defect") {
    const BoxGrid g(32, 4.0);
    VectorField v(g);
    v.fill([](const Vec3& p) {
      const double r = norm(p);
      return r == 0.0 ? Vec3{} : p / std::pow(r, 1.5);
    });
    CHECK(symmetry_defect(v, SymmetrySpec::dss(2.0)) > 0.1);
  }

  TEST_CASE("zero fundamental data extends to the zero field") {
    const SymmetrySpec spec = SymmetrySpec::ss();
    const FundamentalData d =
        FundamentalData::from_function(spec, 8, 8, 1, [](const Vec3&) { return Vec3{}; });
    const VectorField v = extend_from_fundamental_domain(d, BoxGrid(16, 2.0));
    CHECK(lp_norm(v, 2.0) == 0.0);
  }

  TEST_CASE("unit radial sphere data extends to the inverse-square field") {
    const SymmetrySpec spec = SymmetrySpec::ss();
    const FundamentalData d = FundamentalData::from_function(
        spec, 24, 24, 1, [](const Vec3& x) { return x / norm(x); });
    // At sample directions the angular interpolation is exact, so the
    // extension must match the closed form to roundoff at any radius.
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> rad(0.2, 7.0);
    for (int it = 0; it < 24; ++it)
      for (int ip = 0; ip < 24; ++ip) {
        const double theta = (it + 0.5) * 3.14159265358979323846 / 24;
        const double phi = 2.0 * 3.14159265358979323846 * ip / 24;
        const Vec3 dir{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                       std::cos(theta)};
        const double r = rad(rng);
        const Vec3 got = d.evaluate(dir * r);
        const Vec3 expect = inverse_square_data(dir * r);
        CHECK(norm(got - expect) < 1e-12 * norm(expect));
      }
  }

  TEST_CASE("annulus data extends across several cells to its closed form") {
    const SymmetrySpec spec = SymmetrySpec::dss(2.0);
    const FundamentalData d =
        FundamentalData::from_function(spec, 32, 32, 16, inverse_square_data);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> rad(0.25, 8.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      Vec3 dir{gauss(rng), gauss(rng), gauss(rng)};
      dir = dir / norm(dir);
      const Vec3 x = dir * rad(rng);
      const Vec3 got = d.evaluate(x);
      const Vec3 expect = inverse_square_data(x);
      worst = std::max(worst, norm(got - expect) / norm(expect));
    }
    CHECK(worst < 2e-2);  // bilinear-in-angle, linear-in-log-r interpolation
  }

  TEST_CASE("extension satisfies its defining relation exactly off-grid") {
    const SymmetrySpec spec = SymmetrySpec::rdss(2.0, 0.7);
    const FundamentalData d = FundamentalData::from_function(
        spec, 16, 16, 8, [](const Vec3& x) {
          return Vec3{std::sin(x.y), std::cos(x.z), x.x / (1.0 + norm2(x))};
        });
    const double lambda = spec.lambda;
    const double phi = spec.phi();
    std::mt19937 rng(13);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> rad(0.1, 20.0);
    for (int i = 0; i < 200; ++i) {
      Vec3 dir{gauss(rng), gauss(rng), gauss(rng)};
      dir = dir / norm(dir);
      const Vec3 x = dir * rad(rng);
      const Vec3 lhs = d.evaluate(x);
      const Vec3 rhs =
          (rotation_matrix(-phi) * d.evaluate((rotation_matrix(phi) * x) * lambda)) * lambda;
      CHECK(norm(lhs - rhs) < 1e-12 * (norm(lhs) + 1e-30));
    }
  }

  TEST_CASE("extended grids pass the defect check they were built from") {
    const SymmetrySpec spec = SymmetrySpec::dss(2.0);
    const FundamentalData d =
        FundamentalData::from_function(spec, 24, 24, 12, inverse_square_data);
    const VectorField v = extend_from_fundamental_domain(d, BoxGrid(48, 4.0));
    CHECK(symmetry_defect(v, spec) < 1e-11);
  }

  TEST_CASE("extension rejects the origin and absurd radii") {
    const SymmetrySpec spec = SymmetrySpec::dss(2.0);
    const FundamentalData d =
        FundamentalData::from_function(spec, 8, 8, 4, inverse_square_data);
    CHECK_THROWS_AS(d.evaluate(Vec3{0.0, 0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(d.evaluate(Vec3{1e-100, 0.0, 0.0}), std::range_error);
    CHECK_THROWS_AS(d.evaluate(Vec3{1e120, 0.0, 0.0}), std::range_error);
  }
}
