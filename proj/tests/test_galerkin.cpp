#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "lprf/background.hpp"
#include "lprf/compose.hpp"
#include "lprf/field.hpp"
#include "lprf/galerkin.hpp"
#include "lprf/profile.hpp"
#include "lprf/spectral.hpp"
#include "lprf/symmetry.hpp"

using namespace lprf;

namespace {

ScalarField component(const VectorField& v, int c) {
  ScalarField out(v.grid());
  for (std::int64_t q = 0; q < v.size(); ++q) out[q] = v.node_value(q)[c];
  return out;
}

double inner(const VectorField& a, const VectorField& b) {
  const double h = a.grid().spacing();
  double acc = 0.0;
  for (std::int64_t q = 0; q < a.size(); ++q) acc += dot(a.node_value(q), b.node_value(q));
  return acc * h * h * h;
}

FundamentalData swirl(const SymmetrySpec& spec, double amp) {
  return FundamentalData::from_function(spec, 12, 12, 3, [amp](const Vec3& p) {
    return Vec3{-p.y, p.x, 0.0} * (amp / norm2(p));
  });
}

GalerkinTensors diagonal_system(const std::vector<double>& stiff,
                                const std::vector<double>& extra,
                                const std::vector<double>& forcing) {
  GalerkinTensors tns;
  tns.k = int(stiff.size());
  tns.s_nodes = {0.0};
  tns.stiff = stiff;
  std::vector<double> A(stiff.size() * stiff.size(), 0.0);
  for (std::size_t j = 0; j < stiff.size(); ++j)
    A[j * stiff.size() + j] = stiff[j] + extra[j];
  tns.A = {A};
  tns.C = {forcing};
  tns.B.assign(stiff.size() * stiff.size() * stiff.size(), 0.0);
  return tns;
}

}  // namespace

TEST_SUITE("galerkin") {
  TEST_CASE("basis modes are orthonormal, solenoidal, and deterministically ordered") {
    const BoxGrid g(16, 2.0);
    const Basis basis = make_basis(g, 20);
    REQUIRE(basis.size() == 20);

    // lowest shell first, lexicographic tie-break
    CHECK(basis.mode(0).n == std::array<int, 3>{0, 0, 1});
    CHECK(!basis.mode(0).is_sin);
    CHECK(basis.mode(1).n == std::array<int, 3>{0, 0, 1});
    CHECK(basis.mode(1).is_sin);

    std::vector<VectorField> fields;
    for (int i = 0; i < basis.size(); ++i) fields.push_back(basis.field(i));
    for (int i = 0; i < basis.size(); ++i) {
      CHECK(std::abs(inner(fields[i], fields[i]) - 1.0) < 1e-12);
      CHECK(lp_norm(spectral_divergence(fields[i]), 2.0) < 1e-12);
      for (int j = i + 1; j < basis.size(); ++j)
        CHECK(std::abs(inner(fields[i], fields[j])) < 1e-12);
    }

    const Basis one = make_basis(g, 1);
    CHECK(one.size() == 1);
    CHECK(std::abs(lp_norm(one.field(0), 2.0) - 1.0) < 1e-12);

    // modes up to |n|^2 = 3 fit on a 4-point grid, the next shell does not
    CHECK_NOTHROW(make_basis(BoxGrid(4, 1.0), 52));
    CHECK_THROWS_AS(make_basis(BoxGrid(4, 1.0), 53), std::invalid_argument);
  }

  TEST_CASE("mollification is exact on single modes and trivial at width zero") {
    const BoxGrid g(16, 2.0);
    const Basis basis = make_basis(g, 8);
    const VectorField mode = basis.field(5);

    VectorField same = mollify(mode, 0.0);
    same -= mode;
    CHECK(lp_norm(same, 2.0) < 1e-13);

    VectorField constant(g);
    constant.fill([](const Vec3&) { return Vec3{0.3, -0.2, 0.9}; });
    VectorField cm = mollify(constant, 0.4);
    cm -= constant;
    CHECK(lp_norm(cm, 2.0) < 1e-13);

    const double eps = 0.35;
    const double symbol = mollifier_transform(eps, basis.kappa(5));
    CHECK(symbol > 0.0);
    CHECK(symbol <= 1.0);
    VectorField scaled = basis.field(5);
    scaled *= symbol;
    VectorField molly = mollify(mode, eps);
    molly -= scaled;
    CHECK(lp_norm(molly, 2.0) < 1e-12);
  }

  TEST_CASE("bare one-mode assembly matches the hand quadrature") {
    const int N = 32;
    const BoxGrid g(N, 4.0);
    const Basis basis = make_basis(g, 1);
    TensorOptions opt;
    opt.mask.inner = 1e9;  // mask off: every radius stays inside the plateau
    opt.mask.outer = 2e9;
    const GalerkinTensors tns = assemble_tensors(basis, nullptr, nullptr, 0.0, opt);

    // -(grad a, grad a) = -kappa^2 and (a/2, a) = 1/2 are exact; the drift
    // quadrature sums z sin(2 kappa z) over the lattice, which telescopes to
    // the cotangent identity sum_i i sin(2 pi m i / N) = -(N/2) cot(pi m / N).
    const double kappa2 = basis.kappa2(0);
    const double drift = (M_PI / (2.0 * N)) / std::tan(2.0 * M_PI / N);
    const double expected = -kappa2 + 0.5 + drift;
    CHECK(std::abs(tns.A[0][0] - expected) < 1e-8);
    CHECK(std::abs(tns.C[0][0]) == 0.0);
    CHECK(tns.B[0] == 0.0);  // e . kappa = 0 for a single mode
    CHECK(tns.s_nodes.size() == 1);
  }

  TEST_CASE("cubic tensor is antisymmetric in its trailing slots") {
    const BoxGrid g(16, 2.0);
    const Basis basis = make_basis(g, 24);
    const GalerkinTensors tns = assemble_tensors(basis, nullptr, nullptr, 0.1);
    const int k = tns.k;

    double pair_worst = 0.0;
    for (int i = 0; i < k; ++i)
      for (int l = 0; l < k; ++l)
        for (int j = 0; j < k; ++j)
          pair_worst = std::max(
              pair_worst, std::abs(tns.B[(std::size_t(i) * k + l) * k + j] +
                                   tns.B[(std::size_t(i) * k + j) * k + l]));
    CHECK(pair_worst < 1e-12);

    std::mt19937 rng(77);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x(std::size_t(k), 0.0);
      for (double& v : x) v = uni(rng);
      double cubic = 0.0;
      for (int i = 0; i < k; ++i)
        for (int l = 0; l < k; ++l)
          for (int j = 0; j < k; ++j)
            cubic += tns.B[(std::size_t(i) * k + l) * k + j] * x[std::size_t(i)] *
                     x[std::size_t(l)] * x[std::size_t(j)];
      CHECK(std::abs(cubic) < 1e-10);
    }
  }

  TEST_CASE("cubic tensor entries match an independent grid quadrature") {
    const BoxGrid g(16, 2.0);
    const Basis basis = make_basis(g, 12);
    const double eps = 0.15;
    const GalerkinTensors tns = assemble_tensors(basis, nullptr, nullptr, eps);
    const int k = tns.k;

    std::mt19937 rng(5);
    std::uniform_int_distribution<int> pick(0, k - 1);
    for (int trial = 0; trial < 12; ++trial) {
      const int i = pick(rng), l = pick(rng), j = pick(rng);
      const VectorField u = mollify(basis.field(i), eps);
      const VectorField al = basis.field(l);
      const VectorField aj = basis.field(j);
      std::array<VectorField, 3> dal = {spectral_gradient(component(al, 0)),
                                        spectral_gradient(component(al, 1)),
                                        spectral_gradient(component(al, 2))};
      const double h = g.spacing();
      double quad = 0.0;
      for (std::int64_t q = 0; q < u.size(); ++q) {
        const Vec3 uv = u.node_value(q);
        const Vec3 jv = aj.node_value(q);
        for (int c = 0; c < 3; ++c)
          quad -= dot(uv, dal[std::size_t(c)].node_value(q)) * jv[c];
      }
      quad *= h * h * h;
      CHECK(std::abs(tns.B[(std::size_t(i) * k + l) * k + j] - quad) < 1e-10);
    }
  }

  TEST_CASE("time-dependent coefficients interpolate with periodic wrap") {
    const SymmetrySpec spec = SymmetrySpec::dss(2.0);
    const double T = spec.period();
    const BoxGrid g(16, 4.0);
    std::vector<double> s_nodes;
    for (int i = 0; i < 4; ++i) s_nodes.push_back(T * i / 4);
    const ProfileTrajectory w = build_U0(swirl(spec, 0.05), g, s_nodes);

    const Basis basis = make_basis(g, 6);
    TensorOptions opt;
    opt.n_s = 4;
    const GalerkinTensors tns = assemble_tensors(basis, &w, nullptr, 0.0, opt);
    REQUIRE(tns.s_nodes.size() == 4);
    CHECK(tns.period == doctest::Approx(T));

    std::vector<double> a0, aT, mid;
    tns.A_at(0.0, a0);
    tns.A_at(T, aT);  // wraps to the start
    double worst = 0.0;
    for (std::size_t q = 0; q < a0.size(); ++q) worst = std::max(worst, std::abs(a0[q] - aT[q]));
    CHECK(worst < 1e-12);

    // seam interpolation stays between the bracketing nodes
    const double s_seam = T * 7.0 / 8.0;
    tns.A_at(s_seam, mid);
    const std::vector<double>& last = tns.A[3];
    for (std::size_t q = 0; q < mid.size(); ++q) {
      const double lo = std::min(last[q], a0[q]) - 1e-12;
      const double hi = std::max(last[q], a0[q]) + 1e-12;
      CHECK(mid[q] >= lo);
      CHECK(mid[q] <= hi);
    }
  }

  TEST_CASE("integrating factor scheme is second order on a closed-form system") {
    const GalerkinTensors tns =
        diagonal_system({-5.0, -8.0}, {-1.0, -2.0}, {0.7, -0.2});
    const std::vector<double> b0 = {0.5, -0.1};
    const double T = 1.0;

    // closed form: each component relaxes as b = c/mu + (b0 - c/mu) e^{-mu s}
    std::vector<double> exact(2);
    const double mu[2] = {6.0, 10.0};
    const double c[2] = {0.7, -0.2};
    for (int j = 0; j < 2; ++j)
      exact[std::size_t(j)] = c[j] / mu[j] + (b0[std::size_t(j)] - c[j] / mu[j]) * std::exp(-mu[j] * T);

    double err[3];
    const double dts[3] = {T / 16, T / 32, T / 64};
    for (int lvl = 0; lvl < 3; ++lvl) {
      const std::vector<double> bT = integrate_period(tns, b0, T, dts[lvl]).b.back();
      err[lvl] = std::hypot(bT[0] - exact[0], bT[1] - exact[1]);
    }
    CHECK(err[0] / err[1] > 3.2);
    CHECK(err[0] / err[1] < 4.8);
    CHECK(err[1] / err[2] > 3.4);
    CHECK(err[1] / err[2] < 4.6);
  }

  TEST_CASE("integration rejects bad steps and reports blow-up") {
    const GalerkinTensors tns = diagonal_system({-1.0}, {0.0}, {0.2});
    CHECK_THROWS_AS(integrate_period(tns, {0.0}, 1.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(integrate_period(tns, {0.0}, 1.0, -0.1), std::invalid_argument);

    GalerkinTensors bad = diagonal_system({0.0}, {60.0}, {1.0});
    CHECK_THROWS_AS(integrate_period(bad, {1.0}, 1.0, 0.01), std::runtime_error);
  }

  TEST_CASE("discrete energy identity holds at integrator order") {
    const BoxGrid g(16, 2.0);
    const Basis basis = make_basis(g, 8);
    const GalerkinTensors tns = assemble_tensors(basis, nullptr, nullptr, 0.0);
    const int k = tns.k;

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uni(-0.2, 0.2);
    std::vector<double> b0(std::size_t(k), 0.0);
    for (double& v : b0) v = uni(rng);

    const double T = 0.5;
    double resid[2];
    for (int lvl = 0; lvl < 2; ++lvl) {
      const double dt = (lvl == 0) ? T / 64 : T / 128;
      const CoeffTrajectory traj = integrate_period(tns, b0, T, dt);
      std::vector<double> A, C;
      double worst = 0.0;
      for (std::size_t n = 1; n + 1 < traj.b.size(); ++n) {
        double e_prev = 0.0, e_next = 0.0;
        for (double v : traj.b[n - 1]) e_prev += 0.5 * v * v;
        for (double v : traj.b[n + 1]) e_next += 0.5 * v * v;
        const double fd = (e_next - e_prev) / (2.0 * dt);
        tns.A_at(traj.s[n], A);
        tns.C_at(traj.s[n], C);
        double rhs = 0.0;
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j)
            rhs += A[std::size_t(i) * k + j] * traj.b[n][std::size_t(i)] *
                   traj.b[n][std::size_t(j)];
        for (int j = 0; j < k; ++j) rhs += C[std::size_t(j)] * traj.b[n][std::size_t(j)];
        worst = std::max(worst, std::abs(fd - rhs));
      }
      resid[lvl] = worst;
    }
    CHECK(resid[0] / resid[1] > 3.0);
    CHECK(resid[0] / resid[1] < 5.5);
  }

  TEST_CASE("fixed point solves the identity and affine closed forms") {
    const std::vector<double> b0 = {0.4, -0.7, 0.1};
    const auto ident = [](const std::vector<double>& x) { return x; };
    const FixedPointResult r1 = periodic_fixed_point(ident, b0, 10.0, 1e-12, 50);
    CHECK(r1.converged);
    CHECK(r1.iterations == 1);
    CHECK(r1.residual == 0.0);
    CHECK(r1.b == b0);

    const std::vector<double> c = {0.3, -0.1, 0.8};
    const auto affine = [&c](const std::vector<double>& x) {
      std::vector<double> out(x.size());
      for (std::size_t q = 0; q < x.size(); ++q) out[q] = 0.5 * x[q] + c[q];
      return out;
    };
    const FixedPointResult r2 = periodic_fixed_point(affine, b0, 10.0, 1e-11, 100);
    REQUIRE(r2.converged);
    for (std::size_t q = 0; q < c.size(); ++q) CHECK(std::abs(r2.b[q] - 2.0 * c[q]) < 1e-9);
    CHECK(r2.ball_certified);
    CHECK(r2.max_image_norm <= 10.0);
  }

  TEST_CASE("periodic orbit closes for small data at moderate mode count") {
    const SymmetrySpec spec = SymmetrySpec::ss();
    const BoxGrid g(32, 4.0);
    const ProfileTrajectory u0 = build_U0(swirl(spec, 0.05), g, {0.0});
    const BackgroundResult br = build_W(u0, 0.5, 4.0);
    REQUIRE(br.reached);

    const Basis basis = make_basis(g, 32);
    const GalerkinTensors tns = assemble_tensors(basis, &br.w, nullptr, 0.1);
    const double T = spec.period();
    GalerkinParams prm;
    prm.fp_tol = 1e-10;
    const GalerkinState st = solve_periodic_galerkin(basis, tns, T, prm);

    CHECK(st.fp.converged);
    CHECK(st.fp.residual < 1e-8);
    CHECK(st.fp.ball_certified);
    CHECK(st.energy_linf > 0.0);
    CHECK(st.combined_norm >= st.energy_linf);

    // autonomous coefficients: the unique periodic orbit is the equilibrium
    const ProfileTrajectory prof = galerkin_profile(basis, st.coeffs, 0.0, T);
    CHECK(steadiness_defect(prof) < 1e-6);
  }

  TEST_CASE("pressure recovery vanishes for one mode and closes the laplacian identity") {
    const BoxGrid g(16, 2.0);
    const Basis basis = make_basis(g, 6);

    ProfileTrajectory single(g, 0.0, 0.0);
    single.add_node(0.0, basis.field(0));
    const ProfileTrajectory p1 = recover_pressure(single, nullptr);
    REQUIRE(p1.has_pressure());
    CHECK(lp_norm(p1.pressure(0), 2.0) < 1e-12);

    // two interacting modes: -lap p must equal div div of the product tensor
    ProfileTrajectory duo(g, 0.0, 0.0);
    VectorField mix = basis.field(0);
    mix.axpy(0.7, basis.field(4));
    duo.add_node(0.0, mix);
    const ProfileTrajectory p2 = recover_pressure(duo, nullptr);
    const VectorField& A = p2.velocity(0);

    std::array<ScalarField, 3> divrow = {ScalarField(g), ScalarField(g), ScalarField(g)};
    for (int r = 0; r < 3; ++r) {
      VectorField row(g);
      for (std::int64_t q = 0; q < A.size(); ++q) {
        const Vec3 av = A.node_value(q);
        row.set_node_value(q, av * av[r]);
      }
      divrow[std::size_t(r)] = spectral_divergence(row);
    }
    VectorField drows(g);
    for (std::int64_t q = 0; q < drows.size(); ++q)
      drows.set_node_value(q, Vec3{divrow[0][q], divrow[1][q], divrow[2][q]});
    const ScalarField divdiv = spectral_divergence(drows);

    VectorField pwrap(g);
    for (std::int64_t q = 0; q < pwrap.size(); ++q)
      pwrap.set_node_value(q, Vec3{p2.pressure(0)[q], 0.0, 0.0});
    const VectorField lap = spectral_laplacian(pwrap);
    double worst = 0.0;
    for (std::int64_t q = 0; q < lap.size(); ++q)
      worst = std::max(worst, std::abs(-lap.node_value(q).x - divdiv[q]));
    CHECK(worst < 1e-8);

    CHECK_THROWS_AS(recover_pressure(ProfileTrajectory(g), nullptr), std::invalid_argument);
  }

  TEST_CASE("composition reduces to its parts in degenerate configurations") {
    const BoxGrid g(16, 2.0);
    const Basis basis = make_basis(g, 4);

    ProfileTrajectory zero(g, 0.0, 0.0);
    zero.add_node(0.0, VectorField(g));
    const ComposedSolution all_zero =
        compose_solution(zero, ProfileTrajectory(g), ProfileTrajectory(g), PhysicalField{});
    CHECK(all_zero.v.n_slices() == 1);
    CHECK(lp_norm(all_zero.v.slice(0).values, 2.0) == 0.0);
    CHECK(all_zero.residual.max_momentum_l2 < 1e-12);

    ProfileTrajectory u(g, 0.0, 0.0);
    u.add_node(0.0, basis.field(2));
    const ComposedSolution only_a =
        compose_solution(u, ProfileTrajectory(g), ProfileTrajectory(g), PhysicalField{});
    REQUIRE(only_a.v.n_slices() == 1);
    VectorField diff = only_a.v.slice(0).values;
    diff -= only_a.a.slice(0).values;
    CHECK(lp_norm(diff, 2.0) == 0.0);
    CHECK(only_a.A.has_pressure());
    CHECK(only_a.residual.node_coordinate.size() == 1);
  }
}
