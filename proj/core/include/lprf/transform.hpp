// Similarity transform between physical variables v(x, t) and profile
// variables u(y, s), y = x / sqrt(t), s = log t, in the frame rotating with
// angle theta(s) = alpha * s:
//   v(x, t) = (1 / sqrt(t)) R(theta) u(y, s),   pi(x, t) = (1 / t) p(y, s),
// plus strong-form residual evaluators for the profile equation
//   ds u + alpha J u - alpha (J y) . grad u - u/2 - (y/2) . grad u
//        - lap u + u . grad u + grad p = 0
// (alpha = 0: the time-shifted similarity system; additionally dropping ds u
// gives the stationary one) and for the momentum equation in physical
// variables, dt v - lap v + v . grad v + grad pi = 0.

#ifndef LPRF_TRANSFORM_H
#define LPRF_TRANSFORM_H

#include <vector>

#include "lprf/physical_field.hpp"
#include "lprf/profile.hpp"

namespace lprf {

struct ResidualReport {
  std::vector<double> node_coordinate;  // s for profile residuals, t for physical
  std::vector<double> momentum_l2;      // interior L2 of the momentum residual
  std::vector<double> divergence_l2;    // interior L2 of the divergence
  double max_momentum_l2 = 0.0;
  double max_divergence_l2 = 0.0;
};

// Profile trajectory of a physical field: one node per slice at s = log t,
// values on the grid of the first slice. A slice whose frame already equals
// (sqrt(t), alpha log t) on that grid is copied without interpolation, so the
// conversion is exact for co-scaled fields. Carries pressure iff v does.
ProfileTrajectory to_profile(const PhysicalField& v, double alpha);

// Inverse map: slices at t = e^s with co-scaled frames holding the profile
// values verbatim; exact inverse of to_profile on matched grids.
PhysicalField from_profile(const ProfileTrajectory& traj);

// Momentum residual of the rotating-frame profile equation at one stored
// node. linear_only drops the advection u . grad u and the pressure gradient
// (the background equation is pressure-free). Time derivative: 3-node finite
// differences on the stored s-nodes, wrapping when the trajectory declares a
// period; a single-node trajectory is treated as stationary.
VectorField profile_residual_field(const ProfileTrajectory& traj, int node, bool linear_only);

// L2(interior cube |y|_inf <= interior_frac * L) of momentum and divergence
// residuals per node. The drift term grows linearly in y, so the outer shell
// is excluded from norms by default.
ResidualReport profile_equation_residual(const ProfileTrajectory& traj, bool linear_only = false,
                                         double interior_frac = 0.9);

// Physical momentum + divergence residual norms at the interior time slices
// (the first and last slice only serve the time stencil). Pressure absent
// means pi = 0. Spatial terms act on the slice lattice and are mapped through
// the frame; the time derivative is taken at fixed physical x, skipping nodes
// whose stencil leaves a neighbor slice's hull.
ResidualReport nse_residual(const PhysicalField& v, double interior_frac = 0.9);

}  // namespace lprf

#endif
