// Time-dependent velocity fields stored as a list of time slices. Each slice
// keeps its values on a lattice grid together with a SliceFrame mapping
// lattice coordinates to physical ones:
//   x = scale * R(theta) y,   v(x) = (1/scale) R(theta) U(y).
// A slice whose frame tracks the similarity variables (scale = sqrt(t),
// theta = alpha log t) therefore stores the similarity profile exactly, and
// profile/physical conversions are pure samplings.

#ifndef LPRF_PHYSICAL_FIELD_H
#define LPRF_PHYSICAL_FIELD_H

#include <vector>

#include "lprf/field.hpp"
#include "lprf/symmetry.hpp"

namespace lprf {

// Pressure is stored per slice in lattice form too, with the natural scaling
// pi(x) = P(y) / scale^2, so co-scaled slices hold the profile pressure
// exactly. A default-constructed (empty-grid) pressure means "absent".
struct Slice {
  double t = 1.0;
  SliceFrame frame;
  VectorField values;
  ScalarField pressure;

  bool has_pressure() const { return pressure.grid().n > 0; }
};

class PhysicalField {
 public:
  PhysicalField() = default;

  // Slices must be appended with strictly increasing t > 0.
  void add_slice(double t, const SliceFrame& frame, VectorField values);
  void add_slice(double t, const SliceFrame& frame, VectorField values, ScalarField pressure);

  int n_slices() const { return int(slices_.size()); }
  bool empty() const { return slices_.empty(); }
  const Slice& slice(int i) const { return slices_.at(i); }
  Slice& slice(int i) { return slices_.at(i); }
  std::vector<double> times() const;
  double t_min() const;
  double t_max() const;

  // Physical value of one slice at physical location x (throws
  // std::domain_error outside the slice's lattice hull).
  Vec3 sample_slice(int i, const Vec3& x) const;

  // Physical value at (x, t): linear interpolation in log t between the
  // bracketing slices. Throws std::domain_error for t outside the stored
  // range or x outside a bracketing slice's hull.
  Vec3 sample(const Vec3& x, double t) const;

  // Physical values at time t on the nodes of an arbitrary grid.
  VectorField sample_on_grid(const BoxGrid& grid, double t) const;

  // Physical pressure, same interpolation scheme. Throws std::logic_error if
  // the bracketing slices carry no pressure.
  double sample_pressure_slice(int i, const Vec3& x) const;
  double sample_pressure(const Vec3& x, double t) const;
  bool has_pressure() const;

 private:
  int lower_slice(double t) const;
  std::vector<Slice> slices_;
};

// Spacetime similarity image: w(x, t) = lambda R(-phi) v(lambda R(phi) x, lambda^2 t),
// evaluated on the slice layout of v restricted to the slices whose image
// time lambda^2 t is still inside v's stored range.
PhysicalField apply_similarity_symmetry(const PhysicalField& v, double lambda, double phi);

// Relative discrete spacetime L2 symmetry defect over one cell: slice times
// in [t0, lambda^2 t0) with t0 the first stored time, shell
// r_min <= |x| <= r_cap in space, where r_cap keeps every image point
// sampleable (or the caller's r_max if smaller). Requires the stored range to
// cover a full cell.
double symmetry_defect(const PhysicalField& v, const SymmetrySpec& spec, double r_min = 0.0,
                       double r_max = 0.0);

}  // namespace lprf

#endif
