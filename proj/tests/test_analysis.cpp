// Band decompositions, critical norms, and the bounded/small splitting of
// symmetric initial data.

#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "lprf/littlewood_paley.hpp"
#include "lprf/norms.hpp"
#include "lprf/splitting.hpp"
#include "lprf/symmetry.hpp"

using namespace lprf;

namespace {

constexpr double kPi = 3.14159265358979323846;

VectorField random_band_limited(const BoxGrid& g, unsigned seed, int max_mode = 4) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  VectorField f(g);
  const double L = g.half_width;
  for (int m = 1; m <= max_mode; ++m) {
    const double k = kPi * m / L;
    const double a0 = amp(rng), a1 = amp(rng), a2 = amp(rng);
    const double b0 = amp(rng), b1 = amp(rng), b2 = amp(rng);
    VectorField mode(g);
    mode.fill([&](const Vec3& p) {
      return Vec3{a0 * std::sin(k * (p.x + L)) + b0 * std::cos(k * (p.y + L)),
                  a1 * std::sin(k * (p.y + L)) + b1 * std::cos(k * (p.z + L)),
                  a2 * std::sin(k * (p.z + L)) + b2 * std::cos(k * (p.x + L))};
    });
    f += mode;
  }
  return f;
}

// Single Fourier mode cos(kappa (x_axis + L)) along one axis, vector-valued
// in a fixed direction; on a pi-half-width box kappa = m exactly.
VectorField axis_mode(const BoxGrid& g, int axis, int m, const Vec3& dir) {
  VectorField f(g);
  const double L = g.half_width;
  const double k = kPi * m / L;
  f.fill([&](const Vec3& p) {
    const double c = std::cos(k * (p[axis] + L));
    return dir * c;
  });
  return f;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("radial cutoff is 1 inside, 0 outside, monotone between") {
    CHECK(lp_cutoff(0.0, 2.0) == 1.0);
    CHECK(lp_cutoff(0.5, 2.0) == 1.0);
    CHECK(lp_cutoff(1.0, 2.0) == 0.0);
    CHECK(lp_cutoff(1.7, 2.0) == 0.0);
    double prev = 1.0;
    for (int i = 1; i <= 20; ++i) {
      const double v = lp_cutoff(0.5 + 0.025 * i, 2.0);
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
    CHECK(lp_cutoff(0.75, 2.0) > 0.0);
    CHECK(lp_cutoff(0.75, 2.0) < 1.0);
    CHECK_THROWS_AS(lp_cutoff(0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(lp_decompose(VectorField(BoxGrid(8, 1.0)), 0.9), std::invalid_argument);
  }

  TEST_CASE("a mode at an exact power of the base lands in exactly one band") {
    const BoxGrid g(32, kPi);  // frequencies are integers
    const VectorField f = axis_mode(g, 0, 2, {0.0, 0.0, 1.0});
    const LPDecomposition d = lp_decompose(f, 2.0);
    const double total = lp_norm(f, 2.0);
    for (int i = 0; i < d.n_blocks(); ++i) {
      const double bn = lp_norm(d.blocks[i], 2.0);
      if (d.band_index(i) == 1)
        CHECK(std::abs(bn - total) < 1e-12 * total);
      else
        CHECK(bn < 1e-12 * total);
    }
    CHECK(lp_norm(d.low_remainder, 2.0) < 1e-12 * total);
  }

  TEST_CASE("a generic mode touches at most two adjacent bands") {
    const BoxGrid g(32, kPi);
    const VectorField f = axis_mode(g, 1, 3, {1.0, 0.0, 0.0});  // |kappa| = 3
    const LPDecomposition d = lp_decompose(f, 2.0);
    const double total = lp_norm(f, 2.0);
    int nonzero = 0;
    for (int i = 0; i < d.n_blocks(); ++i) {
      if (lp_norm(d.blocks[i], 2.0) > 1e-12 * total) {
        ++nonzero;
        const int j = d.band_index(i);
        CHECK(j >= 1);
        CHECK(j <= 2);
      }
    }
    CHECK(nonzero == 2);
    CHECK(relative_l2(lp_reconstruct(d), f) < 1e-12);
  }

  TEST_CASE("the mean is carried by the low-frequency remainder alone") {
    const BoxGrid g(16, 1.0);
    VectorField f(g);
    f.fill([](const Vec3&) { return Vec3{5.0, -2.0, 0.5}; });
    const LPDecomposition d = lp_decompose(f, 2.0);
    for (const auto& b : d.blocks) CHECK(lp_norm(b, 2.0) < 1e-12);
    CHECK(relative_l2(d.low_remainder, f) < 1e-13);
  }

  TEST_CASE("block sum plus remainder reconstructs exactly, any base") {
    for (double lambda : {2.0, 1.7}) {
      const BoxGrid g(32, 1.3);
      const VectorField f = random_band_limited(g, 11, 6);
      const LPDecomposition d = lp_decompose(f, lambda);
      CHECK(relative_l2(lp_reconstruct(d), f) < 1e-10);
    }
  }

  TEST_CASE("band filters two or more bands apart annihilate each other") {
    const BoxGrid g(32, 1.0);
    const VectorField f = random_band_limited(g, 7, 8);
    const double total = lp_norm(f, 2.0);
    const VectorField d3 = lp_band_filter(f, 3, 2.0);
    CHECK(lp_norm(lp_band_filter(d3, 5, 2.0), 2.0) < 1e-12 * total);
    CHECK(lp_norm(lp_band_filter(d3, 1, 2.0), 2.0) < 1e-12 * total);
    // adjacent bands genuinely overlap
    CHECK(lp_norm(lp_band_filter(d3, 4, 2.0), 2.0) > 1e-6 * total);
  }

  TEST_CASE("besov norm of a single mode is the weighted block norm") {
    const BoxGrid g(32, kPi);
    const double amp = 1.3;
    const VectorField f = axis_mode(g, 1, 2, {0.0, 0.0, amp});  // band j = 1
    BesovParams bp;
    bp.s = -0.25;
    bp.p = 2.0;
    const double volume = std::pow(2.0 * kPi, 3);
    const double expect = std::pow(2.0, bp.s * 1.0) * amp * std::sqrt(volume / 2.0);
    CHECK(std::abs(besov_norm(f, bp) - expect) < 1e-12 * expect);
    bp.q = 1.0;  // a single nonzero term: any outer exponent gives the same value
    CHECK(std::abs(besov_norm(f, bp) - expect) < 1e-12 * expect);
  }

  TEST_CASE("norm report is coherent with its parts") {
    const BoxGrid g(32, 1.0);
    const VectorField f = random_band_limited(g, 5, 6);
    BesovParams bp;
    bp.s = -0.25;
    bp.p = 4.0;
    const NormReport rep = norm_report(f, bp);
    CHECK(rep.besov == doctest::Approx(besov_norm(f, bp)).epsilon(1e-12));
    CHECK(rep.weak_l3 == doctest::Approx(weak_l3_norm(f)).epsilon(1e-12));
    CHECK(rep.l2_uloc == doctest::Approx(l2_uloc_norm(f)).epsilon(1e-12));
    double block_max = 0.0;
    for (const auto& [j, t] : rep.block_magnitudes) block_max = std::max(block_max, t);
    CHECK(rep.besov == doctest::Approx(block_max).epsilon(1e-12));
  }

  TEST_CASE("weak-L3 of x/|x|^2 matches the continuum constant at 128^3") {
    const BoxGrid g(128, 1.0);
    VectorField f(g);
    f.fill([](const Vec3& p) {
      const double r2 = norm2(p);
      return r2 < 1e-30 ? Vec3{} : p / r2;
    });
    const double target = std::cbrt(4.0 * kPi / 3.0);
    const double got = weak_l3_norm(f);
    CHECK(std::abs(got / target - 1.0) < 0.02);
  }

  TEST_CASE("weak-L3 of a ball indicator measures the ball volume") {
    const BoxGrid g(64, 2.0);
    ScalarField f(g);
    f.fill([](const Vec3& p) { return norm2(p) <= 1.0 ? 1.0 : 0.0; });
    const double target = std::cbrt(4.0 * kPi / 3.0);
    CHECK(std::abs(weak_l3_norm(f) / target - 1.0) < 0.01);
  }

  TEST_CASE("critical norms are invariant under the exact grid-aligned rescaling") {
    // g(x) = 2 f(2x) on the half-size box reuses the node values verbatim.
    const BoxGrid ga(32, 1.0), gb(32, 0.5);
    const VectorField f = random_band_limited(ga, 19, 6);
    VectorField z(gb);
    for (int c = 0; c < 3; ++c)
      for (std::int64_t q = 0; q < f.size(); ++q) z.at(c, q) = 2.0 * f.at(c, q);
    BesovParams bp;
    bp.p = 4.0;
    bp.s = -1.0 + 3.0 / bp.p;
    const double b0 = besov_norm(f, bp), b1 = besov_norm(z, bp);
    CHECK(std::abs(b1 / b0 - 1.0) < 1e-9);
    const double w0 = weak_l3_norm(f), w1 = weak_l3_norm(z);
    CHECK(std::abs(w1 / w0 - 1.0) < 1e-12);
  }

  TEST_CASE("base-1.6 and dyadic besov norms are comparable") {
    BesovParams dyadic;
    dyadic.p = 4.0;
    dyadic.s = -1.0 + 3.0 / dyadic.p;
    BesovParams adic = dyadic;
    adic.lambda = 1.6;
    const BoxGrid g(32, 1.0);
    for (unsigned seed : {1u, 2u, 3u}) {
      const VectorField f = random_band_limited(g, seed, 8);
      const double r = besov_norm(f, adic) / besov_norm(f, dyadic);
      CHECK(r > 0.2);
      CHECK(r < 5.0);
    }
  }

  TEST_CASE("uniformly local L2 of a constant is the single-ball mass") {
    const BoxGrid g(64, 2.0);
    VectorField f(g);
    f.fill([](const Vec3&) { return Vec3{0.0, 3.0, 0.0}; });
    const double target = 3.0 * std::sqrt(4.0 * kPi / 3.0);
    CHECK(std::abs(l2_uloc_norm(f) / target - 1.0) < 0.01);
  }

  TEST_CASE("uniformly local L2 of x/|x|^2 concentrates at the singularity") {
    const BoxGrid g(64, 2.0);
    VectorField f(g);
    f.fill([](const Vec3& p) {
      const double r2 = norm2(p);
      return r2 < 1e-30 ? Vec3{} : p / r2;
    });
    const double target = std::sqrt(4.0 * kPi);  // integral of 1/|x|^2 over the unit ball
    CHECK(std::abs(l2_uloc_norm(f) / target - 1.0) < 0.05);
    CHECK_THROWS_AS(l2_uloc_norm(f, -1.0), std::invalid_argument);
  }

  TEST_CASE("clamp split caps the magnitude and conserves the sum") {
    const SymmetrySpec spec = SymmetrySpec::ss();
    const FundamentalData v0 = FundamentalData::from_function(
        spec, 6, 8, 1, [](const Vec3&) { return Vec3{3.0, 4.0, 0.0}; });
    FundamentalData a, b;
    clamp_split(v0, 2.5, a, b);
    for (int it = 0; it < v0.ntheta(); ++it) {
      for (int ip = 0; ip < v0.nphi(); ++ip) {
        const Vec3 va = a.sample(0, it, ip), vb = b.sample(0, it, ip);
        CHECK(norm(va - Vec3{1.5, 2.0, 0.0}) < 1e-14);
        CHECK(norm(vb - Vec3{1.5, 2.0, 0.0}) < 1e-14);
      }
    }
  }

  TEST_CASE("splitting a bounded swirl profile meets the requested threshold") {
    const SymmetrySpec spec = SymmetrySpec::ss();
    const double amp = 10.0;
    const FundamentalData v0 =
        FundamentalData::from_function(spec, 16, 16, 1, [&](const Vec3& p) {
          const double rho = std::sqrt(p.x * p.x + p.y * p.y);
          return Vec3{-p.y, p.x, 0.0} * (amp * rho);
        });
    const BoxGrid eval(32, 2.0);
    BesovParams bp;
    bp.p = 4.0;
    bp.s = -1.0 + 3.0 / bp.p;
    const VectorField full = extend_from_fundamental_domain(v0, eval);
    const double full_besov = besov_norm(full, bp);
    REQUIRE(full_besov > 0.0);

    const double eps = 0.4 * full_besov;
    const SplitResult sr = split_initial_data(v0, eps, bp, eval);
    CHECK(sr.reached);
    CHECK(sr.excess_besov <= eps);
    CHECK(sr.cut_level > 0.0);
    CHECK(sr.cut_level < amp);
    // the clamp bound holds sample-wise and the parts sum back exactly
    for (int it = 0; it < v0.ntheta(); ++it) {
      for (int ip = 0; ip < v0.nphi(); ++ip) {
        const Vec3 va = sr.bounded.sample(0, it, ip);
        const Vec3 vs = va + sr.excess.sample(0, it, ip);
        CHECK(norm(va) <= sr.cut_level * (1.0 + 1e-12) + 1e-15);
        CHECK(norm(vs - v0.sample(0, it, ip)) < 1e-13 * amp);
      }
    }
    // extension is linear, so the extended parts recombine node-exactly
    VectorField sum = extend_from_fundamental_domain(sr.bounded, eval);
    sum += extend_from_fundamental_domain(sr.excess, eval);
    CHECK(relative_l2(sum, full) < 1e-13);
    // clamping only shrinks values, so the bounded part cannot gain weak-L3 mass
    CHECK(sr.bounded_weak_l3 <= weak_l3_norm(full) * (1.0 + 1e-12));
  }

  TEST_CASE("splitting peels a sharp spike off discretely self-similar data") {
    const SymmetrySpec spec = SymmetrySpec::dss(2.0);
    const Vec3 center{0.9, 0.7, 0.6};
    const FundamentalData v0 =
        FundamentalData::from_function(spec, 12, 12, 4, [&](const Vec3& p) {
          const double bump = 28.0 * std::exp(-norm2(p - center) / 0.05);
          return p * ((0.3 + bump) / norm(p));
        });
    const BoxGrid eval(32, 2.0);
    BesovParams bp;
    bp.p = 4.0;
    bp.s = -1.0 + 3.0 / bp.p;
    const double full_besov = besov_norm(extend_from_fundamental_domain(v0, eval), bp);
    const double eps = 0.25 * full_besov;
    const SplitResult sr = split_initial_data(v0, eps, bp, eval);
    CHECK(sr.reached);
    CHECK(sr.excess_besov <= eps);
    CHECK(sr.cut_level < v0.max_sample_magnitude());
    CHECK(lp_norm(extend_from_fundamental_domain(sr.excess, eval), 2.0) > 0.0);
    CHECK(sr.bounded.max_sample_magnitude() <= sr.cut_level * (1.0 + 1e-12));
  }

  TEST_CASE("data already below the threshold is passed through unsplit") {
    const SymmetrySpec spec = SymmetrySpec::ss();
    const FundamentalData v0 =
        FundamentalData::from_function(spec, 8, 8, 1, [](const Vec3& p) {
          return Vec3{-p.y, p.x, 0.0} * 1e-3;
        });
    const BoxGrid eval(32, 2.0);
    BesovParams bp;
    bp.p = 4.0;
    bp.s = -1.0 + 3.0 / bp.p;
    const SplitResult sr = split_initial_data(v0, 1.0, bp, eval);
    CHECK(sr.reached);
    CHECK(sr.cut_level == 0.0);
    CHECK(sr.bounded_weak_l3 == 0.0);
    CHECK(sr.bounded.max_sample_magnitude() == 0.0);
    for (int it = 0; it < v0.ntheta(); ++it)
      for (int ip = 0; ip < v0.nphi(); ++ip)
        CHECK(norm(sr.excess.sample(0, it, ip) - v0.sample(0, it, ip)) == 0.0);
    CHECK_THROWS_AS(split_initial_data(v0, 0.0, bp, eval), std::invalid_argument);
  }
}
