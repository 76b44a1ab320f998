#include "lprf/background.hpp"

#include <cmath>
#include <stdexcept>

#include "lprf/littlewood_paley.hpp"
#include "lprf/spectral.hpp"

namespace lprf {

ProfileTrajectory build_U0(const FundamentalData& a0, const BoxGrid& grid,
                           const std::vector<double>& s_nodes) {
  if (s_nodes.empty()) throw std::invalid_argument("build_U0: no log-time nodes");
  const SymmetrySpec& spec = a0.spec();
  const double period = spec.continuous() ? 0.0 : spec.period();
  ProfileTrajectory traj(grid, spec.alpha, period);
  for (double s : s_nodes) {
    const double root_t = std::exp(0.5 * s);
    const double theta = spec.alpha * s;
    const Mat3 rot = rotation_matrix(theta);
    const Mat3 unrot = rotation_matrix(-theta);
    VectorField g(grid);
    for (int k = 0; k < grid.n; ++k) {
      for (int j = 0; j < grid.n; ++j) {
        for (int i = 0; i < grid.n; ++i) {
          const Vec3 y = grid.node(i, j, k);
          if (norm2(y) == 0.0) continue;  // singular origin stays zero
          g.set_node_value(i, j, k, a0.evaluate(rot * y * root_t));
        }
      }
    }
    VectorField u = heat_evolve(g, 1.0);
    for (std::int64_t q = 0; q < u.size(); ++q)
      u.set_node_value(q, unrot * u.node_value(q) * root_t);
    traj.add_node(s, std::move(u));
  }
  return traj;
}

BackgroundSize background_size(const ProfileTrajectory& u0, double q,
                               std::vector<double> radii) {
  if (u0.empty()) throw std::invalid_argument("background_size: empty trajectory");
  const double L = u0.grid().half_width;
  if (radii.empty()) radii = {0.25 * L, 0.5 * L, 0.75 * L};
  BackgroundSize out;
  out.q = q;
  out.radii = radii;
  out.finite = true;
  for (double r : radii) {
    double worst = 0.0;
    for (int i = 0; i < u0.n_nodes(); ++i)
      worst = std::max(worst, lp_norm(u0.velocity(i), q, shell(0.0, r)));
    out.theta.push_back(worst);
    if (!std::isfinite(worst)) out.finite = false;
  }
  return out;
}

namespace {

// 0 for |y| <= r0, 1 for |y| >= 2 r0, quintic in between; r0 <= 0 keeps all.
ScalarField far_cutoff(const BoxGrid& g, double r0) {
  ScalarField xi(g);
  if (r0 <= 0.0) {
    xi.fill([](const Vec3&) { return 1.0; });
    return xi;
  }
  xi.fill([r0](const Vec3& y) { return 1.0 - lp_cutoff(norm(y) / (2.0 * r0), 2.0); });
  return xi;
}

struct CandidateW {
  ProfileTrajectory w;
  double achieved = 0.0;
  double max_div = 0.0;
};

CandidateW assemble_candidate(const ProfileTrajectory& u0, double r0, double q) {
  const BoxGrid& g = u0.grid();
  const ScalarField xi = far_cutoff(g, r0);
  CandidateW cand;
  cand.w = ProfileTrajectory(g, u0.alpha(), u0.period());
  for (int i = 0; i < u0.n_nodes(); ++i) {
    VectorField wu(g);
    for (int c = 0; c < 3; ++c)
      for (std::int64_t idx = 0; idx < wu.size(); ++idx)
        wu.at(c, idx) = xi[idx] * u0.velocity(i).at(c, idx);
    const VectorField corr = spectral_gradient(newton_potential(spectral_divergence(wu)));
    wu += corr;
    cand.achieved = std::max(cand.achieved, lp_norm(wu, q));
    cand.max_div = std::max(cand.max_div, lp_norm(spectral_divergence(wu), 2.0));
    cand.w.add_node(u0.s_node(i), std::move(wu));
  }
  return cand;
}

}  // namespace

BackgroundResult build_W(const ProfileTrajectory& u0, double alpha_bound, double q,
                         std::vector<double> r0_ladder) {
  if (u0.empty()) throw std::invalid_argument("build_W: empty trajectory");
  if (!(alpha_bound > 0.0)) throw std::invalid_argument("build_W: bound must be positive");
  const double L = u0.grid().half_width;
  if (r0_ladder.empty()) r0_ladder = {0.0, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0};
  std::vector<double> ladder;
  for (double r : r0_ladder)
    if (2.0 * r <= 0.9 * L) ladder.push_back(r);
  if (ladder.empty()) throw std::invalid_argument("build_W: no cutoff radius fits the box");

  BackgroundResult res;
  res.alpha_bound = alpha_bound;
  res.q = q;
  bool have_best = false;
  for (double r0 : ladder) {
    CandidateW cand = assemble_candidate(u0, r0, q);
    if (cand.achieved <= alpha_bound) {
      res.w = std::move(cand.w);
      res.r0 = r0;
      res.achieved = cand.achieved;
      res.max_divergence = cand.max_div;
      res.reached = true;
      return res;
    }
    if (!have_best || cand.achieved < res.achieved) {
      res.w = std::move(cand.w);
      res.r0 = r0;
      res.achieved = cand.achieved;
      res.max_divergence = cand.max_div;
      have_best = true;
    }
  }
  res.reached = false;
  return res;
}

}  // namespace lprf
