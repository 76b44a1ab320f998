// Discrete Fourier calculus on the periodic extension of a BoxGrid:
// transforms, wavevector multipliers, heat semigroup, solenoidal projection,
// Riesz pressure products, Newton potentials, and mollification.
//
// Convention: node x_i = -L + i h, coefficient c_m with
//   f(x) = sum_m c_m exp(i kappa_m . (x + L)),  kappa_m = pi m / L,
// m signed (folded), stored half-spectrum r2c style, x-frequency fastest.

#ifndef LPRF_SPECTRAL_H
#define LPRF_SPECTRAL_H

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "lprf/field.hpp"

namespace lprf {

class SpectralScalar {
 public:
  SpectralScalar() = default;
  explicit SpectralScalar(const BoxGrid& g)
      : grid_(g), c_(std::size_t(g.n) * g.n * (g.n / 2 + 1)) {}

  const BoxGrid& grid() const { return grid_; }
  int nx_half() const { return grid_.n / 2 + 1; }
  std::int64_t size() const { return std::int64_t(c_.size()); }

  std::complex<double>& at(int mx, int my, int mz) {
    return c_[(std::int64_t(mz) * grid_.n + my) * nx_half() + mx];
  }
  std::complex<double> at(int mx, int my, int mz) const {
    return c_[(std::int64_t(mz) * grid_.n + my) * nx_half() + mx];
  }
  std::complex<double>* data() { return c_.data(); }
  const std::complex<double>* data() const { return c_.data(); }

  // Coefficient for any integer frequency triple with |m_d| <= N/2, using
  // hermitian symmetry for negative x-frequencies.
  std::complex<double> coeff(int mx, int my, int mz) const;

 private:
  BoxGrid grid_;
  std::vector<std::complex<double>> c_;
};

struct SpectralVector {
  std::array<SpectralScalar, 3> comp;

  SpectralVector() = default;
  explicit SpectralVector(const BoxGrid& g) : comp{SpectralScalar(g), SpectralScalar(g), SpectralScalar(g)} {}
  const BoxGrid& grid() const { return comp[0].grid(); }
};

// Transforms. Forward transforms normalize by 1/N^3 so coefficients are
// Fourier-series coefficients; inverses are exact round trips.
SpectralScalar fft_forward(const ScalarField& f);
SpectralVector fft_forward(const VectorField& f);
ScalarField fft_inverse(const SpectralScalar& s);
VectorField fft_inverse(const SpectralVector& s);

// Signed wavevector of a stored coefficient slot. Frequencies above N/2 fold
// negative; the Nyquist slot m = N/2 maps to +N/2.
Vec3 wavevector(const BoxGrid& g, int mx, int my, int mz);

// In-place real (even) multiplier sigma(kappa); preserves realness.
void apply_multiplier(SpectralScalar& s, const std::function<double(const Vec3&)>& sigma);
void apply_multiplier(SpectralVector& s, const std::function<double(const Vec3&)>& sigma);

// Derivatives (Nyquist rows zeroed, as usual for odd multipliers).
VectorField spectral_gradient(const ScalarField& f);
ScalarField spectral_divergence(const VectorField& f);
VectorField spectral_laplacian(const VectorField& f);

// Heat semigroup e^{t Laplacian}, t >= 0.
void heat_multiplier(SpectralScalar& s, double t);
void heat_multiplier(SpectralVector& s, double t);
VectorField heat_evolve(const VectorField& f, double t);
ScalarField heat_evolve(const ScalarField& f, double t);

// Solenoidal (Leray) projection: I - kappa kappa^T / |kappa|^2, mean kept.
void leray_project(SpectralVector& s);
VectorField leray_project(const VectorField& f);

// Sum of double Riesz products applied to a symmetric tensor:
//   p = sum_ij R_i R_j q_ij,   multiplier -kappa_i kappa_j / |kappa|^2,
// q given as upper triangle (xx, xy, xz, yy, yz, zz); off-diagonal entries
// count twice. Output has zero mean.
ScalarField riesz_pressure(const std::array<ScalarField, 6>& q);

// Newton potential: phi with (-Laplacian) phi = g on the periodic box, mean
// of g discarded, phi zero-mean.
ScalarField newton_potential(const ScalarField& g);

// Mollification by the tensor cubic B-spline at width eps (eps = 0 is the
// identity): multiplier prod_d sinc^4(eps kappa_d / 2).
double mollifier_transform(double eps, const Vec3& kappa);
VectorField mollify(const VectorField& f, double eps);

// Discrete integral of f times a trig mode over the grid (h^3-weighted sum):
//   integral f(y) cos(kappa_n . y) dy  (is_sin = false)
//   integral f(y) sin(kappa_n . y) dy  (is_sin = true)
// computed exactly from the transform of f.
double trig_inner(const SpectralScalar& f_hat, const std::array<int, 3>& n, bool is_sin);

}  // namespace lprf

#endif
