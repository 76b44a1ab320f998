// Scale-adic Littlewood-Paley decomposition on the periodic box. The radial
// cutoff chi is a fixed quintic smoothstep, identically 1 inside radius
// 1/lambda and 0 outside radius 1; the band filters are differences
//   phi_j(xi) = chi(lambda^(-j-1) xi) - chi(lambda^(-j) xi),
// supported in the shell lambda^(j-1) <= |xi| <= lambda^(j+1). A finite grid
// resolves bands j_min..j_max; everything below j_min (including the mean)
// is kept as an explicit low-frequency remainder so that the block sum plus
// remainder reconstructs the field exactly by telescoping.

#ifndef LPRF_LITTLEWOOD_PALEY_H
#define LPRF_LITTLEWOOD_PALEY_H

#include <vector>

#include "lprf/field.hpp"

namespace lprf {

// The radial cutoff profile: 1 for r <= 1/lambda, 0 for r >= 1, quintic
// smoothstep in between.
double lp_cutoff(double r, double lambda);

struct LPDecomposition {
  double lambda = 2.0;
  int j_min = 0;
  int j_max = -1;
  std::vector<VectorField> blocks;  // band j_min + i
  VectorField low_remainder;        // chi(lambda^(-j_min) xi) part, mean included

  int n_blocks() const { return int(blocks.size()); }
  int band_index(int i) const { return j_min + i; }
};

// Bands covering every nonzero grid frequency; throws for lambda <= 1.
LPDecomposition lp_decompose(const VectorField& f, double lambda);

// Single band filter Delta_j f.
VectorField lp_band_filter(const VectorField& f, int j, double lambda);

// Sum of blocks plus remainder.
VectorField lp_reconstruct(const LPDecomposition& d);

}  // namespace lprf

#endif
