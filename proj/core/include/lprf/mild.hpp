// Small-data mild solutions across one scaling cell. For data b0 given on a
// fundamental domain, the velocity solves the integral equation
//   b(t) = e^{t Lap} b0 - int_0^t e^{(t-sigma) Lap} P div(b x b)(sigma) dsigma
// on the periodic box, iterated by Picard. Times sigma below the cell are
// reached through the cell symmetry
//   b(x, sigma) = lambda^k R(-k phi) b(lambda^k R(k phi) x, lambda^{2k} sigma),
// sampling the current iterate where the mapped point stays on the box and
// falling back to the symmetric data extension where it leaves (the far
// field is data-dominated). The Duhamel integral uses the substitution
// sigma = t - tau^2 and composite Gauss panels in tau, which removes the
// (t - sigma)^{-1/2} edge concentration.
//
// The box must contain the cell image of the profile grid: with equal node
// counts, box half-width = lambda * profile half-width places the largest
// sample points exactly on the hull.

#ifndef LPRF_MILD_H
#define LPRF_MILD_H

#include "lprf/physical_field.hpp"
#include "lprf/profile.hpp"
#include "lprf/symmetry.hpp"

namespace lprf {

struct MildParams {
  int n_times = 8;          // velocity nodes across [1, lambda^2)
  int panels = 4;           // composite Gauss panels on the tau axis
  int max_iterations = 24;
  double tolerance = 1e-9;  // successive relative update target
  double decay_p = 4.0;     // L^p exponent for the decay-rate fit
};

struct MildResult {
  PhysicalField b;            // slices across the closed cell, with pressure
  ProfileTrajectory profile;  // cell-periodic profile on the requested grid
  bool converged = false;
  int iterations = 0;
  double last_update = 0.0;   // final sup_t relative successive difference
  double contraction = 0.0;   // last ratio of successive update sizes
  double decay_rate = 0.0;    // fitted d log ||b(t)||_p / d log t over co-moving balls
  double decay_target = 0.0;  // -1/2 + 3/(2p)
};

MildResult solve_mild_cell(const FundamentalData& b0, const BoxGrid& box,
                           const BoxGrid& profile_grid, const MildParams& params = {});

}  // namespace lprf

#endif
