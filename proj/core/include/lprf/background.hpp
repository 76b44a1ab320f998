// The heat-flow background in similarity variables and its cutoff,
// divergence-corrected far-field part.
//
// For data given on a fundamental domain, the physical heat flow
// v(x, t) = (e^{t Lap} a0)(x) has the profile
//   U0(y, s) = sqrt(t) R(-theta) v(sqrt(t) R(theta) y, t),
// t = e^s, theta = alpha s. Pulling the frame into the data first,
//   U0(., s) = sqrt(t) R(-theta) e^{Lap} [ y -> a0(sqrt(t) R(theta) y) ],
// a unit-time heat flow on the fixed profile grid. Data with the continuous
// symmetry then yields an s-independent profile to rounding, and data with
// the discrete symmetry a T-periodic one, because the frame composition
// reproduces the same grid function up to the cell map.

#ifndef LPRF_BACKGROUND_H
#define LPRF_BACKGROUND_H

#include <vector>

#include "lprf/profile.hpp"
#include "lprf/symmetry.hpp"

namespace lprf {

// Profile of the heat flow of the extended data, one node per entry of
// s_nodes (strictly increasing). The trajectory inherits alpha from the data
// and, for the discrete classes, the cell period.
ProfileTrajectory build_U0(const FundamentalData& a0, const BoxGrid& grid,
                           const std::vector<double>& s_nodes);

// Tabulated local size of a background trajectory:
//   theta[i] = sup over stored s of || u(s) ||_{L^q(|y| <= radii[i])}.
struct BackgroundSize {
  double q = 4.0;
  std::vector<double> radii;
  std::vector<double> theta;
  bool finite = false;
};

// Defaults radii to {L/4, L/2, 3L/4}.
BackgroundSize background_size(const ProfileTrajectory& u0, double q,
                               std::vector<double> radii = {});

struct BackgroundResult {
  ProfileTrajectory w;
  double r0 = 0.0;              // chosen cutoff radius
  double achieved = 0.0;        // sup_s ||W(s)||_{L^q}
  double alpha_bound = 0.0;     // requested bound on that norm
  double q = 4.0;
  bool reached = false;
  double max_divergence = 0.0;  // sup_s ||div W(s)||_2, spectral divergence
};

// W(., s) = xi U0(., s) + grad N(div(xi U0(., s))) with N the periodic
// Newton potential, so div W = 0 to rounding; xi is a radial smoothstep
// vanishing for |y| <= r0 and 1 for |y| >= 2 r0 (r0 = 0 keeps everything).
// Walks the ladder of cutoff radii and returns the first whose norm meets
// the bound; otherwise reached = false and the smallest achieved norm is
// returned. The default ladder is {0, 1, 1.5, 2, 3, 4, 6} clipped so the
// transition shell stays inside the box.
BackgroundResult build_W(const ProfileTrajectory& u0, double alpha_bound, double q = 4.0,
                         std::vector<double> r0_ladder = {});

}  // namespace lprf

#endif
