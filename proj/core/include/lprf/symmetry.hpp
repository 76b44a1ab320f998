// Scaling/rotation symmetry classes for velocity data: the continuous and
// discrete self-similar families (with and without a rotation twist about
// the third axis), fundamental-domain sample sets, extension by symmetry,
// and the measured symmetry defect of gridded data.

#ifndef LPRF_SYMMETRY_H
#define LPRF_SYMMETRY_H

#include <functional>
#include <string>
#include <vector>

#include "lprf/field.hpp"

namespace lprf {

enum class SymmetryKind { SS, RSS, DSS, RDSS };

const char* to_string(SymmetryKind k);
SymmetryKind symmetry_kind_from_string(const std::string& s);

// A symmetry class together with the parameters that pin one cell of it:
//   v(x, t) = lambda R(-phi) v(lambda R(phi) x, lambda^2 t),
// phi = alpha * period, period T = 2 log lambda. The continuous classes
// (SS, RSS) satisfy the relation for every lambda > 0; `lambda` then only
// fixes the probe cell used by defect measurements and solvers.
struct SymmetrySpec {
  SymmetryKind kind = SymmetryKind::SS;
  double lambda = 2.0;
  double alpha = 0.0;

  static SymmetrySpec ss(double probe_lambda = 2.0);
  static SymmetrySpec rss(double alpha, double probe_lambda = 2.0);
  static SymmetrySpec dss(double lambda);
  static SymmetrySpec rdss(double lambda, double phi);

  double period() const;  // T = 2 log lambda
  double phi() const;     // rotation angle per cell = alpha * period
  bool continuous() const { return kind == SymmetryKind::SS || kind == SymmetryKind::RSS; }
  bool rotating() const { return kind == SymmetryKind::RSS || kind == SymmetryKind::RDSS; }

  void validate() const;  // throws std::invalid_argument on bad parameters
};

// Velocity data sampled on a fundamental domain of a symmetry class and
// extended everywhere by the symmetry relation.
//
//   SS/RSS:  profile on the unit sphere (ntheta x nphi, theta cell-centered
//            to avoid the poles), v(x) = (1/r) R(2 alpha log r) sigma(R(-2 alpha log r) xhat).
//   DSS/RDSS: samples on the annulus 1 <= r < lambda at shells
//            r_j = lambda^(j/nr); extension by the cell relation, log-radial
//            by angular interpolation, with the twisted wrap shell at r = lambda.
class FundamentalData {
 public:
  FundamentalData() = default;

  // Sample a velocity function on the fundamental domain of `spec`.
  static FundamentalData from_function(const SymmetrySpec& spec, int ntheta, int nphi,
                                       int nr, const std::function<Vec3(const Vec3&)>& v);

  const SymmetrySpec& spec() const { return spec_; }
  int ntheta() const { return ntheta_; }
  int nphi() const { return nphi_; }
  int nr() const { return nr_; }

  Vec3& sample(int ir, int itheta, int iphi) { return samples_[index(ir, itheta, iphi)]; }
  Vec3 sample(int ir, int itheta, int iphi) const { return samples_[index(ir, itheta, iphi)]; }
  double max_sample_magnitude() const;

  // Extension by symmetry at an arbitrary point. Throws std::domain_error at
  // the origin and std::range_error if the scale recursion leaves floating
  // range.
  Vec3 evaluate(const Vec3& x) const;

 private:
  std::size_t index(int ir, int itheta, int iphi) const {
    return (std::size_t(ir) * ntheta_ + itheta) * nphi_ + iphi;
  }
  Vec3 interp_shell_value(double logr_frac, double theta, double phi_az) const;
  Vec3 interp_angular(int ir, double theta, double phi_az) const;

  SymmetrySpec spec_;
  int ntheta_ = 0, nphi_ = 0, nr_ = 0;
  std::vector<Vec3> samples_;
};

// Extension of fundamental-domain data onto a box grid; the singular origin
// node (present when N is even) is zeroed.
VectorField extend_from_fundamental_domain(const FundamentalData& data, const BoxGrid& grid);

// One application of the cell symmetry to time-independent gridded data:
//   (S v)(x) = lambda R(-phi) v(lambda R(phi) x),
// sampled by interpolation. Throws std::domain_error if the image point of
// any requested node is outside v's grid.
VectorField apply_similarity_symmetry(const VectorField& v, double lambda, double phi,
                                      const BoxGrid& target);

// Relative L2 symmetry defect of time-independent data over the Euclidean
// shell r_min <= |x| <= r_max (defaults: r_min = 1, r_max chosen so that all
// image points stay on the grid). Zero field gives defect 0.
double symmetry_defect(const VectorField& v, const SymmetrySpec& spec,
                       double r_min = 1.0, double r_max = 0.0);

}  // namespace lprf

#endif
