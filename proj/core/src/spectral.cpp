#include "lprf/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace lprf {

namespace {

// One cached FFTW plan pair per grid size, with owned aligned buffers.
// Executions are serialized; plans use FFTW_ESTIMATE so planning is
// deterministic for a given size.
struct PlanSet {
  int n = 0;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit PlanSet(int n_) : n(n_) {
    const std::int64_t nr = std::int64_t(n) * n * n;
    const std::int64_t nc = std::int64_t(n) * n * (n / 2 + 1);
    real = fftw_alloc_real(std::size_t(nr));
    cplx = fftw_alloc_complex(std::size_t(nc));
    // x fastest in memory corresponds to FFTW's last dimension.
    fwd = fftw_plan_dft_r2c_3d(n, n, n, real, cplx, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_3d(n, n, n, cplx, real, FFTW_ESTIMATE);
    if (!fwd || !bwd) throw std::runtime_error("fftw plan creation failed");
  }
  ~PlanSet() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(cplx);
  }
};

std::mutex g_fft_mutex;
std::map<int, std::unique_ptr<PlanSet>>& plan_cache() {
  static std::map<int, std::unique_ptr<PlanSet>> cache;
  return cache;
}

PlanSet& plans_for(int n) {
  auto& cache = plan_cache();
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<PlanSet>(n)).first;
  return *it->second;
}

void forward_component(const BoxGrid& g, const double* src, std::complex<double>* dst) {
  std::lock_guard<std::mutex> lock(g_fft_mutex);
  PlanSet& p = plans_for(g.n);
  const std::int64_t nr = g.size();
  const std::int64_t nc = std::int64_t(g.n) * g.n * (g.n / 2 + 1);
  std::memcpy(p.real, src, std::size_t(nr) * sizeof(double));
  fftw_execute(p.fwd);
  const double scale = 1.0 / double(nr);
  auto* out = reinterpret_cast<std::complex<double>*>(p.cplx);
  for (std::int64_t i = 0; i < nc; ++i) dst[i] = out[i] * scale;
}

void inverse_component(const BoxGrid& g, const std::complex<double>* src, double* dst) {
  std::lock_guard<std::mutex> lock(g_fft_mutex);
  PlanSet& p = plans_for(g.n);
  const std::int64_t nr = g.size();
  const std::int64_t nc = std::int64_t(g.n) * g.n * (g.n / 2 + 1);
  std::memcpy(p.cplx, src, std::size_t(nc) * sizeof(fftw_complex));
  fftw_execute(p.bwd);
  std::memcpy(dst, p.real, std::size_t(nr) * sizeof(double));
}

int fold(int m, int n) { return m <= n / 2 ? m : m - n; }

}  // namespace

std::complex<double> SpectralScalar::coeff(int mx, int my, int mz) const {
  const int n = grid_.n;
  auto wrap = [n](int m) { return ((m % n) + n) % n; };
  if (mx >= 0) return at(mx, wrap(my), wrap(mz));
  return std::conj(at(-mx, wrap(-my), wrap(-mz)));
}

SpectralScalar fft_forward(const ScalarField& f) {
  SpectralScalar s(f.grid());
  forward_component(f.grid(), f.data(), s.data());
  return s;
}

SpectralVector fft_forward(const VectorField& f) {
  SpectralVector s(f.grid());
  for (int c = 0; c < 3; ++c) forward_component(f.grid(), f.data(c), s.comp[c].data());
  return s;
}

ScalarField fft_inverse(const SpectralScalar& s) {
  ScalarField f(s.grid());
  inverse_component(s.grid(), s.data(), f.data());
  return f;
}

VectorField fft_inverse(const SpectralVector& s) {
  VectorField f(s.grid());
  for (int c = 0; c < 3; ++c) inverse_component(s.grid(), s.comp[c].data(), f.data(c));
  return f;
}

Vec3 wavevector(const BoxGrid& g, int mx, int my, int mz) {
  const double base = M_PI / g.half_width;
  return {base * fold(mx, g.n), base * fold(my, g.n), base * fold(mz, g.n)};
}

void apply_multiplier(SpectralScalar& s, const std::function<double(const Vec3&)>& sigma) {
  const BoxGrid& g = s.grid();
  for (int mz = 0; mz < g.n; ++mz)
    for (int my = 0; my < g.n; ++my)
      for (int mx = 0; mx < g.n / 2 + 1; ++mx)
        s.at(mx, my, mz) *= sigma(wavevector(g, mx, my, mz));
}

void apply_multiplier(SpectralVector& s, const std::function<double(const Vec3&)>& sigma) {
  for (int c = 0; c < 3; ++c) apply_multiplier(s.comp[c], sigma);
}

namespace {

// Apply i * kappa_axis, zeroing Nyquist rows (odd multiplier has no
// consistent Nyquist representative).
void derivative_multiplier(SpectralScalar& s, int axis) {
  const BoxGrid& g = s.grid();
  const int n = g.n;
  for (int mz = 0; mz < n; ++mz)
    for (int my = 0; my < n; ++my)
      for (int mx = 0; mx < n / 2 + 1; ++mx) {
        const int m[3] = {mx, my, mz};
        bool nyq = false;
        for (int d = 0; d < 3; ++d) nyq = nyq || (n % 2 == 0 && m[d] == n / 2);
        if (nyq) {
          s.at(mx, my, mz) = 0.0;
          continue;
        }
        const Vec3 kappa = wavevector(g, mx, my, mz);
        s.at(mx, my, mz) *= std::complex<double>(0.0, kappa[axis]);
      }
}

}  // namespace

VectorField spectral_gradient(const ScalarField& f) {
  SpectralScalar s = fft_forward(f);
  VectorField out(f.grid());
  for (int axis = 0; axis < 3; ++axis) {
    SpectralScalar d = s;
    derivative_multiplier(d, axis);
    inverse_component(f.grid(), d.data(), out.data(axis));
  }
  return out;
}

ScalarField spectral_divergence(const VectorField& f) {
  SpectralScalar acc(f.grid());
  for (int axis = 0; axis < 3; ++axis) {
    SpectralScalar s(f.grid());
    forward_component(f.grid(), f.data(axis), s.data());
    derivative_multiplier(s, axis);
    for (std::int64_t i = 0; i < acc.size(); ++i) acc.data()[i] += s.data()[i];
  }
  return fft_inverse(acc);
}

VectorField spectral_laplacian(const VectorField& f) {
  SpectralVector s = fft_forward(f);
  apply_multiplier(s, [](const Vec3& k) { return -norm2(k); });
  return fft_inverse(s);
}

void heat_multiplier(SpectralScalar& s, double t) {
  if (t < 0.0) throw std::invalid_argument("heat_evolve: negative time");
  apply_multiplier(s, [t](const Vec3& k) { return std::exp(-norm2(k) * t); });
}

void heat_multiplier(SpectralVector& s, double t) {
  for (int c = 0; c < 3; ++c) heat_multiplier(s.comp[c], t);
}

VectorField heat_evolve(const VectorField& f, double t) {
  SpectralVector s = fft_forward(f);
  heat_multiplier(s, t);
  return fft_inverse(s);
}

ScalarField heat_evolve(const ScalarField& f, double t) {
  SpectralScalar s = fft_forward(f);
  heat_multiplier(s, t);
  return fft_inverse(s);
}

void leray_project(SpectralVector& s) {
  const BoxGrid& g = s.grid();
  for (int mz = 0; mz < g.n; ++mz)
    for (int my = 0; my < g.n; ++my)
      for (int mx = 0; mx < g.n / 2 + 1; ++mx) {
        const Vec3 k = wavevector(g, mx, my, mz);
        const double k2 = norm2(k);
        if (k2 == 0.0) continue;  // mean component untouched
        std::complex<double> kdotv = 0.0;
        for (int c = 0; c < 3; ++c) kdotv += k[c] * s.comp[c].at(mx, my, mz);
        for (int c = 0; c < 3; ++c) s.comp[c].at(mx, my, mz) -= k[c] / k2 * kdotv;
      }
}

VectorField leray_project(const VectorField& f) {
  SpectralVector s = fft_forward(f);
  leray_project(s);
  return fft_inverse(s);
}

ScalarField riesz_pressure(const std::array<ScalarField, 6>& q) {
  // Upper-triangle component order and its (i, j) index pairs.
  static const int pair_i[6] = {0, 0, 0, 1, 1, 2};
  static const int pair_j[6] = {0, 1, 2, 1, 2, 2};
  const BoxGrid& g = q[0].grid();
  SpectralScalar acc(g);
  for (int c = 0; c < 6; ++c) {
    if (q[c].grid() != g) throw std::invalid_argument("riesz_pressure: grid mismatch");
    SpectralScalar s = fft_forward(q[c]);
    const double mult = (pair_i[c] == pair_j[c]) ? 1.0 : 2.0;
    const int i = pair_i[c], j = pair_j[c];
    for (int mz = 0; mz < g.n; ++mz)
      for (int my = 0; my < g.n; ++my)
        for (int mx = 0; mx < g.n / 2 + 1; ++mx) {
          const Vec3 k = wavevector(g, mx, my, mz);
          const double k2 = norm2(k);
          if (k2 == 0.0) continue;  // zero-mean normalization
          acc.at(mx, my, mz) += s.at(mx, my, mz) * (-mult * k[i] * k[j] / k2);
        }
  }
  return fft_inverse(acc);
}

ScalarField newton_potential(const ScalarField& g) {
  SpectralScalar s = fft_forward(g);
  const BoxGrid& grid = g.grid();
  for (int mz = 0; mz < grid.n; ++mz)
    for (int my = 0; my < grid.n; ++my)
      for (int mx = 0; mx < grid.n / 2 + 1; ++mx) {
        const double k2 = norm2(wavevector(grid, mx, my, mz));
        s.at(mx, my, mz) *= (k2 == 0.0) ? 0.0 : 1.0 / k2;
      }
  return fft_inverse(s);
}

double mollifier_transform(double eps, const Vec3& kappa) {
  double m = 1.0;
  for (int d = 0; d < 3; ++d) {
    const double u = 0.5 * eps * kappa[d];
    if (u != 0.0) {
      const double s = std::sin(u) / u;
      m *= s * s * s * s;
    }
  }
  return m;
}

VectorField mollify(const VectorField& f, double eps) {
  if (eps == 0.0) return f;
  SpectralVector s = fft_forward(f);
  apply_multiplier(s, [eps](const Vec3& k) { return mollifier_transform(eps, k); });
  return fft_inverse(s);
}

double trig_inner(const SpectralScalar& f_hat, const std::array<int, 3>& n, bool is_sin) {
  const BoxGrid& g = f_hat.grid();
  // sum_y f(y) exp(i kappa_n . y) = (-1)^(sum n_d) * conj(F[n]) for real f,
  // F unnormalized; stored coefficients carry 1/N^3, the h^3 weight turns the
  // node sum into the volume integral, combining to V = (2L)^3.
  const std::complex<double> c = f_hat.coeff(n[0], n[1], n[2]);
  const double sign = ((n[0] + n[1] + n[2]) % 2 == 0) ? 1.0 : -1.0;
  const double vol = std::pow(2.0 * g.half_width, 3);
  return is_sin ? -sign * vol * std::imag(c) : sign * vol * std::real(c);
}

}  // namespace lprf
