#include "lprf/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lprf {

namespace {

struct Cell {
  int i0, j0, k0;
  double fx, fy, fz;
};

// Locate the cell containing physical point p and the interpolation weights.
// Points up to one roundoff ulp past the last node are clamped; anything
// further is out of domain.
Cell locate(const BoxGrid& g, const Vec3& p) {
  const double h = g.spacing();
  const double eps = 1e-12 * g.half_width;
  Cell c;
  double u[3];
  for (int d = 0; d < 3; ++d) {
    double t = (p[d] + g.half_width) / h;
    double tmax = double(g.n - 1);
    if (t < 0.0 || t > tmax + eps / h) {
      if (t > -eps / h && t < 0.0) t = 0.0;
      else if (t > tmax && t < tmax + eps / h) t = tmax;
      else throw std::domain_error("sample point outside grid");
    }
    if (t > tmax) t = tmax;
    u[d] = t;
  }
  c.i0 = std::min(int(u[0]), g.n - 2);
  c.j0 = std::min(int(u[1]), g.n - 2);
  c.k0 = std::min(int(u[2]), g.n - 2);
  if (g.n == 1) throw std::domain_error("grid too small to sample");
  c.fx = u[0] - c.i0;
  c.fy = u[1] - c.j0;
  c.fz = u[2] - c.k0;
  return c;
}

template <class At>
double trilinear(const BoxGrid& g, const Cell& c, const At& at) {
  double acc = 0.0;
  for (int dk = 0; dk < 2; ++dk)
    for (int dj = 0; dj < 2; ++dj)
      for (int di = 0; di < 2; ++di) {
        const double w = (di ? c.fx : 1.0 - c.fx) * (dj ? c.fy : 1.0 - c.fy) *
                         (dk ? c.fz : 1.0 - c.fz);
        acc += w * at(c.i0 + di, c.j0 + dj, c.k0 + dk);
      }
  return acc;
}

}  // namespace

double ScalarField::sample(const Vec3& p) const {
  const Cell c = locate(grid_, p);
  return trilinear(grid_, c, [&](int i, int j, int k) { return at(i, j, k); });
}

Vec3 VectorField::sample(const Vec3& p) const {
  const Cell c = locate(grid_, p);
  Vec3 r;
  for (int d = 0; d < 3; ++d)
    r[d] = trilinear(grid_, c, [&](int i, int j, int k) { return at(d, i, j, k); });
  return r;
}

void ScalarField::fill(const std::function<double(const Vec3&)>& f) {
  for (int k = 0; k < grid_.n; ++k)
    for (int j = 0; j < grid_.n; ++j)
      for (int i = 0; i < grid_.n; ++i)
        data_[grid_.index(i, j, k)] = f(grid_.node(i, j, k));
}

void VectorField::fill(const std::function<Vec3(const Vec3&)>& f) {
  for (int k = 0; k < grid_.n; ++k)
    for (int j = 0; j < grid_.n; ++j)
      for (int i = 0; i < grid_.n; ++i)
        set_node_value(grid_.index(i, j, k), f(grid_.node(i, j, k)));
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}
ScalarField& ScalarField::operator*=(double a) {
  for (double& v : data_) v *= a;
  return *this;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < comp_[c].size(); ++i) comp_[c][i] += o.comp_[c][i];
  return *this;
}
VectorField& VectorField::operator-=(const VectorField& o) {
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < comp_[c].size(); ++i) comp_[c][i] -= o.comp_[c][i];
  return *this;
}
VectorField& VectorField::operator*=(double a) {
  for (int c = 0; c < 3; ++c)
    for (double& v : comp_[c]) v *= a;
  return *this;
}
void VectorField::axpy(double a, const VectorField& o) {
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < comp_[c].size(); ++i) comp_[c][i] += a * o.comp_[c][i];
}

RegionPredicate whole_box() {
  return [](const Vec3&) { return true; };
}

RegionPredicate interior_cube(double frac, double half_width) {
  const double bound = frac * half_width;
  return [bound](const Vec3& p) {
    return std::abs(p.x) <= bound && std::abs(p.y) <= bound && std::abs(p.z) <= bound;
  };
}

RegionPredicate shell(double r0, double r1) {
  return [r0, r1](const Vec3& p) {
    const double r = norm(p);
    return r >= r0 && r < r1;
  };
}

namespace {

template <class Mag>
double lp_norm_impl(const BoxGrid& g, double p, const RegionPredicate& where, const Mag& mag) {
  const double h3 = std::pow(g.spacing(), 3);
  const bool inf = std::isinf(p);
  double acc = 0.0;
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i) {
        if (!where(g.node(i, j, k))) continue;
        const double m = mag(g.index(i, j, k));
        if (inf)
          acc = std::max(acc, m);
        else
          acc += std::pow(m, p);
      }
  return inf ? acc : std::pow(h3 * acc, 1.0 / p);
}

}  // namespace

double lp_norm(const ScalarField& f, double p, const RegionPredicate& where) {
  return lp_norm_impl(f.grid(), p, where,
                      [&](std::int64_t i) { return std::abs(f[i]); });
}

double lp_norm(const VectorField& f, double p, const RegionPredicate& where) {
  return lp_norm_impl(f.grid(), p, where,
                      [&](std::int64_t i) { return norm(f.node_value(i)); });
}

double relative_l2(const VectorField& a, const VectorField& b, const RegionPredicate& where) {
  if (a.grid() != b.grid()) throw std::invalid_argument("relative_l2: grid mismatch");
  const BoxGrid& g = a.grid();
  double num = 0.0, den = 0.0;
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i) {
        if (!where(g.node(i, j, k))) continue;
        const std::int64_t idx = g.index(i, j, k);
        num += norm2(a.node_value(idx) - b.node_value(idx));
        den += norm2(a.node_value(idx));
      }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::sqrt(num / (num + 1e-300));
  return std::sqrt(num / den);
}

}  // namespace lprf
