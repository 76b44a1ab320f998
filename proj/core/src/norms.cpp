#include "lprf/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lprf/parallel.hpp"

namespace lprf {

double besov_norm(const LPDecomposition& d, const BesovParams& bp) {
  if (bp.p < 1.0) throw std::invalid_argument("besov_norm: p must be >= 1");
  std::vector<double> terms;
  terms.reserve(d.blocks.size());
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    const int j = d.band_index(int(i));
    const double bn = lp_norm(d.blocks[i], bp.p);
    terms.push_back(std::pow(d.lambda, bp.s * j) * bn);
  }
  if (std::isinf(bp.q)) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, t);
    return m;
  }
  if (bp.q < 1.0) throw std::invalid_argument("besov_norm: q must be >= 1");
  double acc = 0.0;
  for (double t : terms) acc += std::pow(t, bp.q);
  return std::pow(acc, 1.0 / bp.q);
}

double besov_norm(const VectorField& f, const BesovParams& bp) {
  return besov_norm(lp_decompose(f, bp.lambda), bp);
}

namespace {

double weak_l3_of_sorted(std::vector<double>& mags, double cell_volume, int min_cells) {
  if (mags.empty()) return 0.0;
  if (min_cells < 1) min_cells = 1;
  const std::size_t k0 = std::min(mags.size(), std::size_t(min_cells));
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double best = 0.0;
  for (std::size_t k = k0; k <= mags.size(); ++k) {
    const double level = mags[k - 1];
    if (level <= 0.0) break;  // sorted: all later levels vanish too
    best = std::max(best, level * std::cbrt(double(k) * cell_volume));
  }
  return best;
}

}  // namespace

double weak_l3_norm(const VectorField& f, int min_cells) {
  const BoxGrid& g = f.grid();
  std::vector<double> mags(std::size_t(g.size()));
  for (std::int64_t q = 0; q < g.size(); ++q) mags[std::size_t(q)] = norm(f.node_value(q));
  return weak_l3_of_sorted(mags, std::pow(g.spacing(), 3), min_cells);
}

double weak_l3_norm(const ScalarField& f, int min_cells) {
  const BoxGrid& g = f.grid();
  std::vector<double> mags(std::size_t(g.size()));
  for (std::int64_t q = 0; q < g.size(); ++q) mags[std::size_t(q)] = std::abs(f[q]);
  return weak_l3_of_sorted(mags, std::pow(g.spacing(), 3), min_cells);
}

double l2_uloc_norm(const VectorField& f, double radius, double center_spacing) {
  if (radius <= 0.0 || center_spacing <= 0.0)
    throw std::invalid_argument("l2_uloc_norm: radius and spacing must be positive");
  const BoxGrid& g = f.grid();
  const double L = g.half_width;
  const double h = g.spacing();
  const double w = h * h * h;
  // Centers span [-(L - radius), L - radius] per axis so each ball stays
  // inside the box; a box smaller than one ball degenerates to one center.
  const double cmax = std::max(0.0, L - radius);
  const int m = int(std::floor(cmax / center_spacing));
  std::vector<double> centers;
  for (int i = -m; i <= m; ++i) centers.push_back(i * center_spacing);

  const double r2 = radius * radius;
  const std::size_t nc = centers.size();
  std::vector<double> best_for_cz(nc, 0.0);
  parallel_for(std::int64_t(nc), [&](std::int64_t icz) {
    const double cz = centers[std::size_t(icz)];
    double best = 0.0;
    for (double cy : centers) {
      for (double cx : centers) {
        double acc = 0.0;
        const int i0 = std::max(0, int(std::ceil((cx - radius + L) / h)));
        const int i1 = std::min(g.n - 1, int(std::floor((cx + radius + L) / h)));
        const int j0 = std::max(0, int(std::ceil((cy - radius + L) / h)));
        const int j1 = std::min(g.n - 1, int(std::floor((cy + radius + L) / h)));
        const int k0 = std::max(0, int(std::ceil((cz - radius + L) / h)));
        const int k1 = std::min(g.n - 1, int(std::floor((cz + radius + L) / h)));
        for (int k = k0; k <= k1; ++k) {
          const double dz = -L + k * h - cz;
          for (int j = j0; j <= j1; ++j) {
            const double dy = -L + j * h - cy;
            const double rho2 = dz * dz + dy * dy;
            if (rho2 > r2) continue;
            for (int i = i0; i <= i1; ++i) {
              const double dx = -L + i * h - cx;
              if (rho2 + dx * dx > r2) continue;
              acc += norm2(f.node_value(i, j, k));
            }
          }
        }
        best = std::max(best, acc);
      }
    }
    best_for_cz[std::size_t(icz)] = best;
  });
  double best = 0.0;
  for (double b : best_for_cz) best = std::max(best, b);
  return std::sqrt(best * w);
}

NormReport norm_report(const VectorField& f, const BesovParams& bp) {
  NormReport rep;
  rep.besov_params = bp;
  rep.weak_l3 = weak_l3_norm(f);
  rep.l2_uloc = l2_uloc_norm(f);
  const LPDecomposition d = lp_decompose(f, bp.lambda);
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    const int j = d.band_index(int(i));
    rep.block_magnitudes.emplace_back(j, std::pow(d.lambda, bp.s * j) * lp_norm(d.blocks[i], bp.p));
  }
  rep.besov = besov_norm(d, bp);
  return rep;
}

}  // namespace lprf
