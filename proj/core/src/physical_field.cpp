#include "lprf/physical_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lprf {

void PhysicalField::add_slice(double t, const SliceFrame& frame, VectorField values) {
  add_slice(t, frame, std::move(values), ScalarField());
}

void PhysicalField::add_slice(double t, const SliceFrame& frame, VectorField values,
                              ScalarField pressure) {
  if (!(t > 0.0)) throw std::invalid_argument("slice times must be positive");
  if (!slices_.empty() && !(t > slices_.back().t))
    throw std::invalid_argument("slice times must be strictly increasing");
  if (!(frame.scale > 0.0)) throw std::invalid_argument("slice frame scale must be positive");
  if (pressure.grid().n > 0 && pressure.grid() != values.grid())
    throw std::invalid_argument("pressure and velocity must share a slice grid");
  slices_.push_back(Slice{t, frame, std::move(values), std::move(pressure)});
}

std::vector<double> PhysicalField::times() const {
  std::vector<double> t;
  t.reserve(slices_.size());
  for (const Slice& s : slices_) t.push_back(s.t);
  return t;
}

double PhysicalField::t_min() const {
  if (slices_.empty()) throw std::logic_error("empty physical field");
  return slices_.front().t;
}

double PhysicalField::t_max() const {
  if (slices_.empty()) throw std::logic_error("empty physical field");
  return slices_.back().t;
}

Vec3 PhysicalField::sample_slice(int i, const Vec3& x) const {
  const Slice& s = slices_.at(i);
  const Vec3 u = s.frame.to_lattice(x);
  const Vec3 val = s.values.sample(u);
  return (rotation_matrix(s.frame.theta) * val) / s.frame.scale;
}

int PhysicalField::lower_slice(double t) const {
  // Largest index with slices_[i].t <= t (times are strictly increasing).
  int lo = 0, hi = int(slices_.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (slices_[mid].t <= t)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

Vec3 PhysicalField::sample(const Vec3& x, double t) const {
  if (slices_.empty()) throw std::logic_error("empty physical field");
  const double rel = 1e-12 * slices_.back().t;
  if (t < slices_.front().t - rel || t > slices_.back().t + rel)
    throw std::domain_error("time outside stored slice range");
  t = std::min(std::max(t, slices_.front().t), slices_.back().t);
  const int i = lower_slice(t);
  if (slices_[i].t == t || i + 1 == int(slices_.size())) return sample_slice(i, x);
  const double w =
      (std::log(t) - std::log(slices_[i].t)) / (std::log(slices_[i + 1].t) - std::log(slices_[i].t));
  const Vec3 a = sample_slice(i, x);
  const Vec3 b = sample_slice(i + 1, x);
  return a * (1.0 - w) + b * w;
}

double PhysicalField::sample_pressure_slice(int i, const Vec3& x) const {
  const Slice& s = slices_.at(i);
  if (!s.has_pressure()) throw std::logic_error("slice carries no pressure");
  const Vec3 u = s.frame.to_lattice(x);
  return s.pressure.sample(u) / (s.frame.scale * s.frame.scale);
}

double PhysicalField::sample_pressure(const Vec3& x, double t) const {
  if (slices_.empty()) throw std::logic_error("empty physical field");
  const double rel = 1e-12 * slices_.back().t;
  if (t < slices_.front().t - rel || t > slices_.back().t + rel)
    throw std::domain_error("time outside stored slice range");
  t = std::min(std::max(t, slices_.front().t), slices_.back().t);
  const int i = lower_slice(t);
  if (slices_[i].t == t || i + 1 == int(slices_.size())) return sample_pressure_slice(i, x);
  const double w =
      (std::log(t) - std::log(slices_[i].t)) / (std::log(slices_[i + 1].t) - std::log(slices_[i].t));
  return sample_pressure_slice(i, x) * (1.0 - w) + sample_pressure_slice(i + 1, x) * w;
}

bool PhysicalField::has_pressure() const {
  if (slices_.empty()) return false;
  for (const Slice& s : slices_)
    if (!s.has_pressure()) return false;
  return true;
}

VectorField PhysicalField::sample_on_grid(const BoxGrid& grid, double t) const {
  VectorField out(grid);
  for (int kz = 0; kz < grid.n; ++kz)
    for (int jy = 0; jy < grid.n; ++jy)
      for (int ix = 0; ix < grid.n; ++ix)
        out.set_node_value(ix, jy, kz, sample(grid.node(ix, jy, kz), t));
  return out;
}

PhysicalField apply_similarity_symmetry(const PhysicalField& v, double lambda, double phi) {
  if (v.empty()) throw std::logic_error("empty physical field");
  const double l2 = lambda * lambda;
  const Mat3 rot = rotation_matrix(phi);
  const Mat3 rot_back = rotation_matrix(-phi);
  PhysicalField out;
  for (int i = 0; i < v.n_slices(); ++i) {
    const Slice& s = v.slice(i);
    const double t_image = l2 * s.t;
    if (t_image > v.t_max() * (1.0 + 1e-12)) break;
    VectorField w(s.values.grid());
    const BoxGrid& g = s.values.grid();
    for (int kz = 0; kz < g.n; ++kz)
      for (int jy = 0; jy < g.n; ++jy)
        for (int ix = 0; ix < g.n; ++ix) {
          const Vec3 x = s.frame.to_physical(g.node(ix, jy, kz));
          const Vec3 val = (rot_back * v.sample((rot * x) * lambda, t_image)) * lambda;
          // Store in lattice representation: values = scale * R(-theta) * physical.
          w.set_node_value(ix, jy, kz,
                           (rotation_matrix(-s.frame.theta) * val) * s.frame.scale);
        }
    out.add_slice(s.t, s.frame, std::move(w));
  }
  if (out.empty())
    throw std::invalid_argument("stored time range too short for one symmetry cell");
  return out;
}

double symmetry_defect(const PhysicalField& v, const SymmetrySpec& spec, double r_min,
                       double r_max) {
  spec.validate();
  if (v.empty()) throw std::logic_error("empty physical field");
  const double lambda = spec.lambda;
  const double l2 = lambda * lambda;
  const double t0 = v.t_min();
  if (v.t_max() < l2 * t0 * (1.0 - 1e-12))
    throw std::invalid_argument("stored time range too short for one symmetry cell");
  const Mat3 rot = rotation_matrix(spec.phi());
  const Mat3 rot_back = rotation_matrix(-spec.phi());

  double num = 0.0, den = 0.0;
  for (int i = 0; i < v.n_slices(); ++i) {
    const Slice& s = v.slice(i);
    if (s.t >= l2 * t0 * (1.0 - 1e-12)) break;
    const BoxGrid& g = s.values.grid();
    // Keep image points strictly inside the hull of the slices bracketing
    // the image time; the rotated cube of a slice contains the ball of
    // radius scale * L.
    const double t_image = l2 * s.t;
    // Conservative cap: smallest inscribed-ball radius among all slices.
    double hull = s.frame.scale * g.half_width;
    for (int j = 0; j < v.n_slices(); ++j)
      hull = std::min(hull, v.slice(j).frame.scale * v.slice(j).values.grid().half_width);
    double cap = 0.95 * hull / lambda;
    if (r_max > 0.0) cap = std::min(cap, r_max);
    const double lo = (r_min > 0.0) ? r_min : 0.0;
    if (!(cap > lo))
      throw std::invalid_argument("symmetry defect shell is empty; grid too small for this scale");

    const double w_cell = std::pow(s.frame.scale * g.spacing(), 3);
    for (int kz = 0; kz < g.n; ++kz)
      for (int jy = 0; jy < g.n; ++jy)
        for (int ix = 0; ix < g.n; ++ix) {
          const Vec3 x = s.frame.to_physical(g.node(ix, jy, kz));
          const double r = norm(x);
          if (r < lo || r > cap) continue;
          const Vec3 here =
              (rotation_matrix(s.frame.theta) * s.values.node_value(ix, jy, kz)) / s.frame.scale;
          const Vec3 image = (rot_back * v.sample((rot * x) * lambda, t_image)) * lambda;
          num += w_cell * norm2(here - image);
          den += w_cell * norm2(here);
        }
  }
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

}  // namespace lprf
