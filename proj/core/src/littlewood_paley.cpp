#include "lprf/littlewood_paley.hpp"

#include <cmath>
#include <stdexcept>

#include "lprf/spectral.hpp"

namespace lprf {

namespace {
double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
}  // namespace

double lp_cutoff(double r, double lambda) {
  if (!(lambda > 1.0)) throw std::invalid_argument("littlewood-paley base must exceed 1");
  const double lo = 1.0 / lambda;
  return 1.0 - smoothstep5((r - lo) / (1.0 - lo));
}

VectorField lp_band_filter(const VectorField& f, int j, double lambda) {
  if (!(lambda > 1.0)) throw std::invalid_argument("littlewood-paley base must exceed 1");
  SpectralVector s = fft_forward(f);
  const double down = std::pow(lambda, -double(j));
  apply_multiplier(s, [lambda, down](const Vec3& kappa) {
    const double r = norm(kappa) * down;
    return lp_cutoff(r / lambda, lambda) - lp_cutoff(r, lambda);
  });
  return fft_inverse(s);
}

LPDecomposition lp_decompose(const VectorField& f, double lambda) {
  if (!(lambda > 1.0)) throw std::invalid_argument("littlewood-paley base must exceed 1");
  const BoxGrid& g = f.grid();
  LPDecomposition d;
  d.lambda = lambda;

  const double kappa_min = 3.14159265358979323846 / g.half_width;
  const double kappa_max = std::sqrt(3.0) * kappa_min * (g.n / 2);
  // Band j touches frequencies in (lambda^(j-1), lambda^(j+1)).
  d.j_min = int(std::ceil(std::log(kappa_min) / std::log(lambda))) - 1;
  d.j_max = int(std::floor(std::log(kappa_max) / std::log(lambda))) + 1;

  const SpectralVector hat = fft_forward(f);
  for (int j = d.j_min; j <= d.j_max; ++j) {
    SpectralVector s = hat;
    const double down = std::pow(lambda, -double(j));
    apply_multiplier(s, [lambda, down](const Vec3& kappa) {
      const double r = norm(kappa) * down;
      return lp_cutoff(r / lambda, lambda) - lp_cutoff(r, lambda);
    });
    d.blocks.push_back(fft_inverse(s));
  }
  {
    SpectralVector s = hat;
    const double down = std::pow(lambda, -double(d.j_min));
    apply_multiplier(s, [lambda, down](const Vec3& kappa) {
      return lp_cutoff(norm(kappa) * down, lambda);
    });
    d.low_remainder = fft_inverse(s);
  }
  return d;
}

VectorField lp_reconstruct(const LPDecomposition& d) {
  VectorField out = d.low_remainder;
  for (const VectorField& b : d.blocks) out += b;
  return out;
}

}  // namespace lprf
