#include "lprf/splitting.hpp"

#include <cmath>
#include <stdexcept>

namespace lprf {

void clamp_split(const FundamentalData& v0, double cut, FundamentalData& bounded,
                 FundamentalData& excess) {
  bounded = v0;
  excess = v0;
  for (int ir = 0; ir < v0.nr(); ++ir) {
    for (int it = 0; it < v0.ntheta(); ++it) {
      for (int ip = 0; ip < v0.nphi(); ++ip) {
        const Vec3 v = v0.sample(ir, it, ip);
        const double m = norm(v);
        Vec3 a = v;
        if (m > cut) a = (m > 0.0) ? v * (cut / m) : Vec3{};
        bounded.sample(ir, it, ip) = a;
        excess.sample(ir, it, ip) = v - a;
      }
    }
  }
}

SplitResult split_initial_data(const FundamentalData& v0, double eps, const BesovParams& bp,
                               const BoxGrid& eval_grid, int bisection_steps) {
  if (!(eps > 0.0)) throw std::invalid_argument("split_initial_data: eps must be positive");
  if (v0.nr() == 0 || v0.ntheta() == 0 || v0.nphi() == 0)
    throw std::invalid_argument("split_initial_data: empty fundamental data");

  const auto excess_besov_at = [&](double cut, SplitResult& out) {
    clamp_split(v0, cut, out.bounded, out.excess);
    out.cut_level = cut;
    out.excess_besov = besov_norm(extend_from_fundamental_domain(out.excess, eval_grid), bp);
    return out.excess_besov;
  };

  SplitResult res;
  if (excess_besov_at(0.0, res) <= eps) {
    // Already small: nothing needs to be peeled off into the bounded part.
    res.reached = true;
    res.bounded_weak_l3 = 0.0;
    return res;
  }

  double lo = 0.0;                          // excess too large here
  double hi = v0.max_sample_magnitude();    // zero excess here
  SplitResult trial;
  for (int it = 0; it < bisection_steps; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (excess_besov_at(mid, trial) <= eps)
      hi = mid;
    else
      lo = mid;
  }
  excess_besov_at(hi, res);
  res.reached = res.excess_besov <= eps;
  res.bounded_weak_l3 = weak_l3_norm(extend_from_fundamental_domain(res.bounded, eval_grid));
  return res;
}

}  // namespace lprf
