#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lprf/diagnostics.hpp"

namespace lprf {

namespace {

constexpr double kNormFloor = 1e-14;

}  // namespace

RateFit convergence_rate_fit(std::vector<double> times, std::vector<double> norms,
                             double target) {
  if (times.size() != norms.size()) throw std::invalid_argument("sample count mismatch");
  if (times.size() < 6) throw std::invalid_argument("rate fit needs at least 6 samples");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw std::invalid_argument("sample times must be positive");
    if (i > 0 && times[i] <= times[i - 1])
      throw std::invalid_argument("sample times must increase");
    if (norms[i] < 0.0) throw std::invalid_argument("norms must be nonnegative");
  }
  if (times.back() / times.front() < 30.0 * (1.0 - 1e-12))
    throw std::invalid_argument("sample times must span a factor of 30");

  RateFit fit;
  fit.times = std::move(times);
  fit.norms = std::move(norms);
  fit.target = target;

  std::vector<double> lt, ln;
  for (std::size_t i = 0; i < fit.times.size(); ++i) {
    if (fit.norms[i] < kNormFloor) continue;  // degenerate sample
    lt.push_back(std::log(fit.times[i]));
    ln.push_back(std::log(fit.norms[i]));
  }
  if (lt.size() < 6) {
    fit.inconclusive = true;
    return fit;
  }

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    mx += lt[i];
    my += ln[i];
  }
  mx /= double(lt.size());
  my /= double(lt.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    sxx += (lt[i] - mx) * (lt[i] - mx);
    sxy += (lt[i] - mx) * (ln[i] - my);
  }
  fit.exponent = sxy / sxx;
  fit.amplitude = std::exp(my - fit.exponent * mx);
  fit.passed = fit.exponent >= target - fit.tolerance;
  return fit;
}

RateFit difference_rate_fit(const PhysicalField& v, const PhysicalField& baseline, double p,
                            double target, double r_fix) {
  if (v.empty() || baseline.empty()) throw std::invalid_argument("empty field");
  if (!(p >= 1.0)) throw std::invalid_argument("norm index must be at least 1");

  std::vector<int> used;
  for (int i = 0; i < v.n_slices(); ++i) {
    const double t = v.slice(i).t;
    if (t >= baseline.t_min() && t <= baseline.t_max()) used.push_back(i);
  }
  if (used.size() < 6) throw std::invalid_argument("rate fit needs at least 6 common times");

  if (!(r_fix > 0.0)) {
    // largest ball sampleable on every used slice of both fields
    double cap = 1e300;
    const auto hull = [](const Slice& sl) {
      const BoxGrid& g = sl.values.grid();
      return sl.frame.scale * (g.half_width - g.spacing());
    };
    for (int i : used) cap = std::min(cap, hull(v.slice(i)));
    for (int i = 0; i < baseline.n_slices(); ++i) cap = std::min(cap, hull(baseline.slice(i)));
    r_fix = 0.95 * cap;
  }

  std::vector<double> times, norms;
  for (int i : used) {
    const Slice& sl = v.slice(i);
    const BoxGrid& g = sl.values.grid();
    const double scale = sl.frame.scale;
    const Mat3 rot = rotation_matrix(sl.frame.theta);
    const double w = std::pow(scale * g.spacing(), 3);
    double acc = 0.0;
    for (int k = 0; k < g.n; ++k)
      for (int j = 0; j < g.n; ++j)
        for (int ii = 0; ii < g.n; ++ii) {
          const Vec3 x = sl.frame.to_physical(g.node(ii, j, k));
          if (norm(x) > r_fix) continue;
          const Vec3 dv =
              rot * sl.values.node_value(g.index(ii, j, k)) * (1.0 / scale) -
              baseline.sample(x, sl.t);
          acc += std::pow(norm(dv), p);
        }
    times.push_back(sl.t);
    norms.push_back(std::pow(acc * w, 1.0 / p));
  }
  return convergence_rate_fit(std::move(times), std::move(norms), target);
}

}  // namespace lprf
