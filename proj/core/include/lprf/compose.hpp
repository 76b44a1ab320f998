// Composition of the solved pieces into one physical solution:
//   A = U + W with recovered pressure, a = the physical field of A,
//   v = a + b with summed pressures.
// The correction equation residual (the momentum equation of a driven by the
// coupling to b) is reported in similarity variables, where the change of
// variables is exact and no cross-slice time stencil is needed.

#ifndef LPRF_COMPOSE_H
#define LPRF_COMPOSE_H

#include "lprf/physical_field.hpp"
#include "lprf/profile.hpp"
#include "lprf/transform.hpp"

namespace lprf {

struct ComposedSolution {
  ProfileTrajectory A;  // U + W, pressure attached
  PhysicalField a;      // physical counterpart of A
  PhysicalField b;      // small-data part (may be empty)
  PhysicalField v;      // a + b, pressures summed
  ResidualReport residual;  // A-equation residual with the b-coupling terms
};

// U and W must share grid and symmetry frame; W may be empty. bphys (may be
// empty) must cover the times e^s of U's nodes; Bprofile is its profile used
// for the pressure cross terms and the coupling residual.
ComposedSolution compose_solution(const ProfileTrajectory& U, const ProfileTrajectory& W,
                                  const ProfileTrajectory& Bprofile, const PhysicalField& bphys,
                                  double interior_frac = 0.9);

}  // namespace lprf

#endif
