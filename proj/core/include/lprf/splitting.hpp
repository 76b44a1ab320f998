// Decomposition of symmetric initial data into a pointwise-bounded part and
// a small remainder: the fundamental-domain samples are clamped at a cut
// level chosen by bisection so that the remainder's critical Besov norm
// drops below a requested threshold.

#ifndef LPRF_SPLITTING_H
#define LPRF_SPLITTING_H

#include "lprf/norms.hpp"
#include "lprf/symmetry.hpp"

namespace lprf {

struct SplitResult {
  FundamentalData bounded;  // magnitude-clamped part, |samples| <= cut_level
  FundamentalData excess;   // original minus bounded; same symmetry class
  double cut_level = 0.0;
  double excess_besov = 0.0;    // measured on the evaluation grid
  double bounded_weak_l3 = 0.0;
  bool reached = false;  // excess_besov <= the requested threshold
};

// Clamp the fundamental samples at magnitude `cut`: bounded keeps direction
// and caps magnitude, excess carries the rest. Extension by symmetry is
// linear in the samples, so the two extended fields sum to the original
// exactly.
void clamp_split(const FundamentalData& v0, double cut, FundamentalData& bounded,
                 FundamentalData& excess);

// Find the smallest cut level (within bisection resolution) whose excess has
// Besov norm <= eps on eval_grid. A datum already below eps returns the pair
// (0, v0). The full-clamp end always has zero excess, so the search cannot
// run off the bracket; `reached` still records whether the final split met
// the threshold.
SplitResult split_initial_data(const FundamentalData& v0, double eps, const BesovParams& bp,
                               const BoxGrid& eval_grid, int bisection_steps = 24);

}  // namespace lprf

#endif
