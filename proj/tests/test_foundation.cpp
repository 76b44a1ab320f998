// Geometry, fields, FFT calculus, and finite-difference stencils.

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "lprf/field.hpp"
#include "lprf/geometry.hpp"
#include "lprf/parallel.hpp"
#include "lprf/spectral.hpp"
#include "lprf/stencil.hpp"

using namespace lprf;

namespace {
constexpr double kPi = 3.14159265358979323846;

double max_abs_diff(const Mat3& a, const Mat3& b) {
  double m = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
  return m;
}

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
}  // namespace

TEST_SUITE("foundation") {
  TEST_CASE("rotation at zero is the identity") {
    CHECK(max_abs_diff(rotation_matrix(0.0), Mat3::identity()) == 0.0);
  }

  TEST_CASE("rotation at quarter turn matches exact entries") {
    const Mat3 r = rotation_matrix(kPi / 2);
    Mat3 expect = Mat3::identity();
    expect(0, 0) = 0.0; expect(0, 1) = -1.0;
    expect(1, 0) = 1.0; expect(1, 1) = 0.0;
    CHECK(max_abs_diff(r, expect) < 1e-15);
  }

  TEST_CASE("half turn composed twice is a full turn") {
    const Mat3 r = rotation_matrix(kPi) * rotation_matrix(kPi);
    CHECK(max_abs_diff(r, Mat3::identity()) < 1e-14);
  }

  TEST_CASE("rotation group law holds for random angle pairs") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
      const double s = dist(rng), tau = dist(rng);
      CHECK(max_abs_diff(rotation_matrix(s) * rotation_matrix(tau), rotation_matrix(s + tau)) <
            1e-13);
    }
  }

  TEST_CASE("rotation generator matches first-order finite differences") {
    const double s = 0.63;
    double err[2];
    const double hs[2] = {1e-3, 1e-4};
    for (int k = 0; k < 2; ++k) {
      const double h = hs[k];
      const Mat3 fd = (rotation_matrix(s + h) - rotation_matrix(s)) * (1.0 / h);
      err[k] = max_abs_diff(fd, kRotationGenerator * rotation_matrix(s));
    }
    CHECK(err[1] < err[0]);
    CHECK(err[0] / err[1] == doctest::Approx(10.0).epsilon(0.05));  // first-order decay
  }

  TEST_CASE("rotation matrices are orthogonal with unit determinant") {
    const Mat3 r = rotation_matrix(1.234);
    CHECK(max_abs_diff(r * r.transpose(), Mat3::identity()) < 1e-15);
    const double det = r(0, 0) * r(1, 1) - r(0, 1) * r(1, 0);  // block determinant
    CHECK(det == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("box grid places the origin on the lattice for even sizes") {
    const BoxGrid g(16, 4.0);
    CHECK(g.spacing() == doctest::Approx(0.5));
    CHECK(g.coord(8) == 0.0);
    CHECK(g.node(0, 0, 0).x == -4.0);
    CHECK(g.index(1, 2, 3) == (std::int64_t(3) * 16 + 2) * 16 + 1);
  }

  TEST_CASE("trilinear sampling is exact on trilinear polynomials") {
    const BoxGrid g(16, 2.0);
    ScalarField f(g);
    f.fill([](const Vec3& p) { return (1.0 + p.x) * (2.0 - p.y) * (0.5 + p.z); });
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-1.8, 1.6);
    for (int i = 0; i < 50; ++i) {
      const Vec3 p{dist(rng), dist(rng), dist(rng)};
      const double exact = (1.0 + p.x) * (2.0 - p.y) * (0.5 + p.z);
      CHECK(f.sample(p) == doctest::Approx(exact).epsilon(1e-12));
    }
    CHECK_THROWS_AS(f.sample(Vec3{0.0, 0.0, 3.0}), std::domain_error);
  }

  TEST_CASE("lp norms of a constant field match closed forms") {
    const BoxGrid g(16, 2.0);
    ScalarField f(g);
    f.fill([](const Vec3&) { return 3.0; });
    const double vol = std::pow(2.0 * g.half_width, 3);
    CHECK(lp_norm(f, 2.0) == doctest::Approx(3.0 * std::sqrt(vol)).epsilon(1e-13));
    CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) == doctest::Approx(3.0));
  }

  TEST_CASE("fft round trip reproduces a random field") {
    const BoxGrid g(32, 3.0);
    VectorField f = random_band_limited(g, 3);
    const VectorField back = fft_inverse(fft_forward(f));
    CHECK(relative_l2(f, back) < 1e-13);
  }

  TEST_CASE("spectral gradient differentiates a trig mode exactly") {
    const BoxGrid g(32, 3.0);
    const double k = 2.0 * kPi / g.half_width;  // mode m = 2
    ScalarField f(g);
    const double L = g.half_width;
    f.fill([&](const Vec3& p) { return std::sin(k * (p.x + L)); });
    const VectorField grad = spectral_gradient(f);
    VectorField expect(g);
    expect.fill([&](const Vec3& p) { return Vec3{k * std::cos(k * (p.x + L)), 0.0, 0.0}; });
    CHECK(relative_l2(expect, grad) < 1e-12);
  }

  TEST_CASE("heat semigroup maps gaussians to gaussians with variance growth") {
    const BoxGrid g(96, 9.0);
    const double s2 = 0.5, t = 0.5;
    ScalarField f(g);
    f.fill([&](const Vec3& p) { return std::exp(-norm2(p) / (2.0 * s2)); });
    const ScalarField evolved = heat_evolve(f, t);
    const double v2 = s2 + 2.0 * t;
    const double amp = std::pow(s2 / v2, 1.5);
    double worst = 0.0;
    for (int kz = 0; kz < g.n; ++kz)
      for (int jy = 0; jy < g.n; ++jy)
        for (int ix = 0; ix < g.n; ++ix) {
          const Vec3 p = g.node(ix, jy, kz);
          const double exact = amp * std::exp(-norm2(p) / (2.0 * v2));
          worst = std::max(worst, std::abs(evolved.at(ix, jy, kz) - exact));
        }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("heat semigroup composes and contracts lp norms") {
    const BoxGrid g(32, 3.0);
    VectorField f = random_band_limited(g, 17);
    VectorField twice = heat_evolve(heat_evolve(f, 0.1), 0.1);
    VectorField once = heat_evolve(f, 0.2);
    CHECK(relative_l2(once, twice) < 1e-12);
    CHECK(relative_l2(f, heat_evolve(f, 0.0)) < 1e-15);
    for (double p : {2.0, 4.0})
      CHECK(lp_norm(heat_evolve(f, 0.3), p) <= lp_norm(f, p) * (1.0 + 1e-12));
    CHECK_THROWS_AS(heat_evolve(f, -1.0), std::invalid_argument);
  }

  TEST_CASE("solenoidal projection kills divergence and is idempotent") {
    const BoxGrid g(32, 3.0);
    VectorField f = random_band_limited(g, 23);
    const VectorField pf = leray_project(f);
    CHECK(lp_norm(spectral_divergence(pf), 2.0) < 1e-11 * lp_norm(pf, 2.0));
    CHECK(relative_l2(pf, leray_project(pf)) < 1e-13);
  }

  TEST_CASE("double riesz products reproduce a single-mode closed form") {
    const BoxGrid g(32, 3.0);
    const double L = g.half_width;
    const double k = kPi * 2.0 / L;
    std::array<ScalarField, 6> q;
    for (auto& c : q) c = ScalarField(g);
    q[0].fill([&](const Vec3& p) { return std::cos(k * (p.x + L)); });  // xx entry
    const ScalarField p = riesz_pressure(q);
    // Multiplier -kx*kx/|k|^2 = -1 on this mode.
    ScalarField expect(g);
    expect.fill([&](const Vec3& pt) { return -std::cos(k * (pt.x + L)); });
    double num = 0.0, den = 0.0;
    for (std::int64_t i = 0; i < p.size(); ++i) {
      num += std::pow(p[i] - expect[i], 2);
      den += std::pow(expect[i], 2);
    }
    CHECK(std::sqrt(num / den) < 1e-12);
  }

  TEST_CASE("newton potential inverts the laplacian on a trig mode") {
    const BoxGrid g(32, 3.0);
    const double L = g.half_width;
    const double k = kPi * 3.0 / L;
    ScalarField gsrc(g);
    gsrc.fill([&](const Vec3& p) { return std::cos(k * (p.y + L)); });
    const ScalarField phi = newton_potential(gsrc);
    ScalarField expect(g);
    expect.fill([&](const Vec3& p) { return std::cos(k * (p.y + L)) / (k * k); });
    ScalarField diff = phi;
    diff -= expect;
    CHECK(lp_norm(diff, 2.0) < 1e-12 * lp_norm(expect, 2.0));
  }

  TEST_CASE("mollifier acts as its transform on single modes") {
    const BoxGrid g(32, 3.0);
    const double L = g.half_width;
    const double eps = 0.2;
    const Vec3 kap{kPi * 2.0 / L, kPi * 1.0 / L, 0.0};
    VectorField f(g);
    f.fill([&](const Vec3& p) {
      return Vec3{std::cos(kap.x * (p.x + L) + kap.y * (p.y + L)), 0.0, 0.0};
    });
    const VectorField mf = mollify(f, eps);
    const double factor = mollifier_transform(eps, kap);
    CHECK(factor > 0.0);
    CHECK(factor <= 1.0);
    VectorField expect = f;
    expect *= factor;
    CHECK(relative_l2(expect, mf) < 1e-12);
    // identity at eps = 0 and mass preservation on constants
    CHECK(relative_l2(f, mollify(f, 0.0)) < 1e-15);
    VectorField c(g);
    c.fill([](const Vec3&) { return Vec3{1.0, 2.0, -0.5}; });
    CHECK(relative_l2(c, mollify(c, 0.3)) < 1e-13);
  }

  TEST_CASE("trig projections integrate modes with the right sign and mass") {
    const BoxGrid g(32, 3.0);
    const double L = g.half_width;
    const double vol = std::pow(2.0 * L, 3);
    const std::array<int, 3> n = {1, 2, 0};
    const Vec3 kap{kPi * n[0] / L, kPi * n[1] / L, kPi * n[2] / L};
    ScalarField fc(g), fs(g);
    fc.fill([&](const Vec3& p) { return std::cos(dot(kap, p)); });
    fs.fill([&](const Vec3& p) { return std::sin(dot(kap, p)); });
    const SpectralScalar hc = fft_forward(fc);
    const SpectralScalar hs = fft_forward(fs);
    CHECK(trig_inner(hc, n, false) == doctest::Approx(vol / 2).epsilon(1e-12));
    CHECK(trig_inner(hc, n, true) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(trig_inner(hs, n, true) == doctest::Approx(vol / 2).epsilon(1e-12));
    CHECK(trig_inner(hs, n, false) == doctest::Approx(0.0).epsilon(1e-12));
    // cross terms with a different mode vanish
    const std::array<int, 3> m = {2, 1, 1};
    CHECK(std::abs(trig_inner(hc, m, false)) < 1e-12 * vol);
    CHECK(std::abs(trig_inner(hc, m, true)) < 1e-12 * vol);
  }

  TEST_CASE("difference weights match classic stencil tables") {
    const auto c2 = diff_weights(0.0, {-1.0, 0.0, 1.0}, 1);
    CHECK(c2[0] == doctest::Approx(-0.5));
    CHECK(c2[1] == doctest::Approx(0.0));
    CHECK(c2[2] == doctest::Approx(0.5));
    const auto l2 = diff_weights(0.0, {-1.0, 0.0, 1.0}, 2);
    CHECK(l2[0] == doctest::Approx(1.0));
    CHECK(l2[1] == doctest::Approx(-2.0));
    CHECK(l2[2] == doctest::Approx(1.0));
    const auto one_sided = diff_weights(0.0, {0.0, 1.0, 2.0, 3.0, 4.0}, 1);
    CHECK(one_sided[0] == doctest::Approx(-25.0 / 12));
    CHECK(one_sided[1] == doctest::Approx(4.0));
    CHECK(one_sided[2] == doctest::Approx(-3.0));
    CHECK(one_sided[3] == doctest::Approx(4.0 / 3));
    CHECK(one_sided[4] == doctest::Approx(-0.25));
  }

  TEST_CASE("fourth-order derivatives are exact on quartic polynomials") {
    const BoxGrid g(16, 2.0);
    ScalarField f(g);
    f.fill([](const Vec3& p) { return std::pow(p.x, 4) - 2.0 * std::pow(p.x, 3) + p.x; });
    const ScalarField d = fd_derivative(f, 0, 1);
    const ScalarField dd = fd_derivative(f, 0, 2);
    double worst1 = 0.0, worst2 = 0.0;
    for (int kz = 0; kz < g.n; ++kz)
      for (int jy = 0; jy < g.n; ++jy)
        for (int ix = 0; ix < g.n; ++ix) {
          const double x = g.coord(ix);
          worst1 = std::max(worst1,
                            std::abs(d.at(ix, jy, kz) - (4.0 * x * x * x - 6.0 * x * x + 1.0)));
          worst2 = std::max(worst2, std::abs(dd.at(ix, jy, kz) - (12.0 * x * x - 12.0 * x)));
        }
    CHECK(worst1 < 1e-10);
    CHECK(worst2 < 1e-9);
  }

  TEST_CASE("derivative stencils converge at fourth order on a wave") {
    double errs[2];
    int idx = 0;
    for (int n : {32, 64}) {
      const BoxGrid g(n, 2.0);
      ScalarField f(g);
      f.fill([](const Vec3& p) { return std::sin(2.0 * p.x); });
      const ScalarField d = fd_derivative(f, 0, 1);
      double worst = 0.0;
      for (int kz = 0; kz < g.n; ++kz)
        for (int jy = 0; jy < g.n; ++jy)
          for (int ix = 0; ix < g.n; ++ix)
            worst = std::max(worst,
                             std::abs(d.at(ix, jy, kz) - 2.0 * std::cos(2.0 * g.coord(ix))));
      errs[idx++] = worst;
    }
    CHECK(errs[0] / errs[1] > 8.0);  // ~16 expected at 4th order
  }

  TEST_CASE("parallel loops reproduce serial sums") {
    std::vector<double> out(1000, 0.0);
    parallel_for(1000, [&](std::int64_t i) { out[i] = std::sqrt(double(i)); });
    set_thread_count(4);
    std::vector<double> out4(1000, 0.0);
    parallel_for(1000, [&](std::int64_t i) { out4[i] = std::sqrt(double(i)); });
    set_thread_count(1);
    CHECK(out == out4);
  }
}
