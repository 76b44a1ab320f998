#include "lprf/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lprf {

std::vector<double> diff_weights(double x0, const std::vector<double>& xs, int m) {
  // Fornberg, "Generation of finite difference formulas on arbitrarily
  // spaced grids" (1988) recurrence.
  const int nn = int(xs.size());
  if (nn < m + 1) throw std::invalid_argument("diff_weights: too few nodes");
  std::vector<std::vector<double>> c(std::size_t(nn), std::vector<double>(std::size_t(m) + 1, 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < nn; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(std::size_t(nn), 0.0);
  for (int i = 0; i < nn; ++i) w[std::size_t(i)] = c[i][m];
  return w;
}

namespace {

// Per-node uniform-grid windows at 4th order: offsets plus weights (for unit
// spacing; scaled by h^-m at use).  Window size 5 for m=1, 6 for m=2 at the
// faces (centered 5-point second derivative is 4th order by symmetry).
struct LineStencil {
  std::vector<std::vector<int>> offsets;   // per node position class
  std::vector<std::vector<double>> weights;
};

const LineStencil& line_stencil(int n, int m) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, LineStencil> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, m);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const int width = (m == 1) ? 5 : 6;
  const int reach = 2;  // centered radius for interior nodes
  if (n < width) throw std::invalid_argument("grid too coarse for 4th-order stencils");
  LineStencil st;
  st.offsets.resize(std::size_t(n));
  st.weights.resize(std::size_t(n));
  for (int i = 0; i < n; ++i) {
    int lo, hi;
    if (m == 1 || (i - reach >= 0 && i + reach < n)) {
      lo = std::max(0, std::min(i - reach, n - 5));
      hi = lo + 4;
    } else {
      lo = std::max(0, std::min(i - reach, n - width));
      hi = lo + width - 1;
    }
    std::vector<double> xs;
    std::vector<int> off;
    for (int p = lo; p <= hi; ++p) {
      xs.push_back(double(p - i));
      off.push_back(p - i);
    }
    st.offsets[std::size_t(i)] = off;
    st.weights[std::size_t(i)] = diff_weights(0.0, xs, m);
  }
  return cache.emplace(key, std::move(st)).first->second;
}

void apply_line_stencil(const BoxGrid& g, const double* src, double* dst, int axis, int m) {
  const LineStencil& st = line_stencil(g.n, m);
  const double scale = std::pow(1.0 / g.spacing(), m);
  const std::int64_t stride = (axis == 0) ? 1 : (axis == 1) ? g.n : std::int64_t(g.n) * g.n;
  const int n = g.n;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int pos = (axis == 0) ? i : (axis == 1) ? j : k;
        const std::int64_t base = g.index(i, j, k);
        const auto& off = st.offsets[std::size_t(pos)];
        const auto& w = st.weights[std::size_t(pos)];
        double acc = 0.0;
        for (std::size_t q = 0; q < off.size(); ++q)
          acc += w[q] * src[base + stride * off[q]];
        dst[base] = acc * scale;
      }
}

}  // namespace

ScalarField fd_derivative(const ScalarField& f, int axis, int m) {
  ScalarField out(f.grid());
  apply_line_stencil(f.grid(), f.data(), out.data(), axis, m);
  return out;
}

VectorField fd_derivative(const VectorField& f, int axis, int m) {
  VectorField out(f.grid());
  for (int c = 0; c < 3; ++c)
    apply_line_stencil(f.grid(), f.data(c), out.data(c), axis, m);
  return out;
}

ScalarField fd_divergence(const VectorField& f) {
  ScalarField out(f.grid());
  for (int axis = 0; axis < 3; ++axis) {
    ScalarField d(f.grid());
    apply_line_stencil(f.grid(), f.data(axis), d.data(), axis, 1);
    out += d;
  }
  return out;
}

VectorField fd_gradient(const ScalarField& f) {
  VectorField out(f.grid());
  for (int axis = 0; axis < 3; ++axis)
    apply_line_stencil(f.grid(), f.data(), out.data(axis), axis, 1);
  return out;
}

VectorField fd_laplacian(const VectorField& f) {
  VectorField out(f.grid());
  for (int axis = 0; axis < 3; ++axis) {
    VectorField d = fd_derivative(f, axis, 2);
    out += d;
  }
  return out;
}

VectorField fd_advect(const VectorField& u, const VectorField& v) {
  if (u.grid() != v.grid()) throw std::invalid_argument("fd_advect: grid mismatch");
  VectorField out(v.grid());
  for (int axis = 0; axis < 3; ++axis) {
    VectorField dv = fd_derivative(v, axis, 1);
    for (int c = 0; c < 3; ++c)
      for (std::int64_t i = 0; i < v.size(); ++i)
        out.at(c, i) += u.at(axis, i) * dv.at(c, i);
  }
  return out;
}

}  // namespace lprf
