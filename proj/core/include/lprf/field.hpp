// Scalar and 3-vector sample containers on a BoxGrid, x-fastest storage,
// with trilinear sampling, pointwise algebra, and L^p norms.

#ifndef LPRF_FIELD_H
#define LPRF_FIELD_H

#include <functional>
#include <vector>

#include "lprf/geometry.hpp"

namespace lprf {

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const BoxGrid& g) : grid_(g), data_(g.size(), 0.0) {}

  const BoxGrid& grid() const { return grid_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::int64_t size() const { return std::int64_t(data_.size()); }

  double& at(int i, int j, int k) { return data_[grid_.index(i, j, k)]; }
  double at(int i, int j, int k) const { return data_[grid_.index(i, j, k)]; }
  double& operator[](std::int64_t i) { return data_[i]; }
  double operator[](std::int64_t i) const { return data_[i]; }

  // Trilinear interpolation at a physical point; throws std::domain_error if
  // the point lies outside the grid's convex hull of nodes.
  double sample(const Vec3& p) const;

  void fill(const std::function<double(const Vec3&)>& f);

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);

 private:
  BoxGrid grid_;
  std::vector<double> data_;
};

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const BoxGrid& g) : grid_(g) {
    for (auto& c : comp_) c.assign(std::size_t(g.size()), 0.0);
  }

  const BoxGrid& grid() const { return grid_; }
  double* data(int c) { return comp_[c].data(); }
  const double* data(int c) const { return comp_[c].data(); }
  std::int64_t size() const { return grid_.size(); }

  double& at(int c, int i, int j, int k) { return comp_[c][grid_.index(i, j, k)]; }
  double at(int c, int i, int j, int k) const { return comp_[c][grid_.index(i, j, k)]; }
  double& at(int c, std::int64_t idx) { return comp_[c][idx]; }
  double at(int c, std::int64_t idx) const { return comp_[c][idx]; }

  Vec3 node_value(std::int64_t idx) const {
    return {comp_[0][idx], comp_[1][idx], comp_[2][idx]};
  }
  void set_node_value(std::int64_t idx, const Vec3& v) {
    comp_[0][idx] = v.x;
    comp_[1][idx] = v.y;
    comp_[2][idx] = v.z;
  }
  Vec3 node_value(int i, int j, int k) const { return node_value(grid_.index(i, j, k)); }
  void set_node_value(int i, int j, int k, const Vec3& v) {
    set_node_value(grid_.index(i, j, k), v);
  }

  Vec3 sample(const Vec3& p) const;

  void fill(const std::function<Vec3(const Vec3&)>& f);

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double a);

  // this += a * o
  void axpy(double a, const VectorField& o);

 private:
  BoxGrid grid_;
  std::array<std::vector<double>, 3> comp_;
};

using RegionPredicate = std::function<bool(const Vec3&)>;

// All of the box.
RegionPredicate whole_box();
// Cube |x|_inf <= frac * L (the "interior" used when truncation-boundary
// artifacts must stay out of a norm).
RegionPredicate interior_cube(double frac, double half_width);
// Euclidean shell r0 <= |x| < r1.
RegionPredicate shell(double r0, double r1);

// L^p norm with volume element h^3 over the nodes satisfying the predicate;
// p = infinity is the max.  Vector values enter through their Euclidean
// magnitude.
double lp_norm(const ScalarField& f, double p, const RegionPredicate& where = whole_box());
double lp_norm(const VectorField& f, double p, const RegionPredicate& where = whole_box());

// Relative L^2 distance over a region: ||a - b||_2 / max(||a||_2, floor).
double relative_l2(const VectorField& a, const VectorField& b,
                   const RegionPredicate& where = whole_box());

}  // namespace lprf

#endif
