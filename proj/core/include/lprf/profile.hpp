// Similarity-variable trajectories: a velocity profile u(y, s) (optionally
// with profile pressure p(y, s)) sampled at increasing log-time nodes on one
// shared lattice grid. A trajectory may declare a period T, in which case
// sampling wraps s modulo T using the seam between the last and first nodes.

#ifndef LPRF_PROFILE_H
#define LPRF_PROFILE_H

#include <vector>

#include "lprf/field.hpp"

namespace lprf {

class ProfileTrajectory {
 public:
  ProfileTrajectory() = default;
  explicit ProfileTrajectory(const BoxGrid& grid, double alpha = 0.0, double period = 0.0)
      : grid_(grid), alpha_(alpha), period_(period) {}

  const BoxGrid& grid() const { return grid_; }
  double alpha() const { return alpha_; }
  // Declared period in s; 0 means aperiodic. Periodic trajectories store
  // nodes in [s0, s0 + T) without the duplicate endpoint.
  double period() const { return period_; }
  void set_period(double T) { period_ = T; }
  void set_alpha(double a) { alpha_ = a; }

  int n_nodes() const { return int(s_.size()); }
  bool empty() const { return s_.empty(); }
  double s_node(int i) const { return s_.at(i); }
  const std::vector<double>& s_nodes() const { return s_; }
  const VectorField& velocity(int i) const { return u_.at(i); }
  VectorField& velocity(int i) { return u_.at(i); }
  const ScalarField& pressure(int i) const { return p_.at(i); }
  ScalarField& pressure(int i) { return p_.at(i); }
  bool has_pressure() const { return !p_.empty() && p_.size() == u_.size(); }

  // Nodes must be appended with strictly increasing s; either every node
  // carries a pressure or none does.
  void add_node(double s, VectorField u);
  void add_node(double s, VectorField u, ScalarField p);

  // Linear interpolation in s; wraps modulo the period when one is declared,
  // otherwise throws std::domain_error outside [s_front, s_back].
  VectorField velocity_at(double s) const;
  ScalarField pressure_at(double s) const;

 private:
  void locate(double s, int& i0, int& i1, double& w) const;

  BoxGrid grid_;
  double alpha_ = 0.0;
  double period_ = 0.0;
  std::vector<double> s_;
  std::vector<VectorField> u_;
  std::vector<ScalarField> p_;
};

// Relative L2 mismatch between u(s + T) and u(s), aggregated over every
// stored node s with s + T inside the stored range (interpolating at s + T).
// Requires the range to cover at least one shift; throws otherwise.
double periodicity_defect(const ProfileTrajectory& traj, double T);

// max_i ||u(s_i) - u(s_0)||_2 / ||u(s_0)||_2; zero trajectory gives 0.
double steadiness_defect(const ProfileTrajectory& traj);

}  // namespace lprf

#endif
