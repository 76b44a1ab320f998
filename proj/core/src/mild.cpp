#include "lprf/mild.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lprf/background.hpp"
#include "lprf/spectral.hpp"

namespace lprf {

namespace {

constexpr int kGaussN = 8;
constexpr double kGaussX[kGaussN] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGaussW[kGaussN] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

std::array<ScalarField, 6> velocity_tensor(const VectorField& u) {
  const BoxGrid& g = u.grid();
  std::array<ScalarField, 6> t{ScalarField(g), ScalarField(g), ScalarField(g),
                               ScalarField(g), ScalarField(g), ScalarField(g)};
  for (std::int64_t q = 0; q < u.size(); ++q) {
    const Vec3 v = u.node_value(q);
    t[0][q] = v.x * v.x;
    t[1][q] = v.x * v.y;
    t[2][q] = v.x * v.z;
    t[3][q] = v.y * v.y;
    t[4][q] = v.y * v.z;
    t[5][q] = v.z * v.z;
  }
  return t;
}

// Spectral P div T for a symmetric tensor (xx, xy, xz, yy, yz, zz):
// (div T)_i = i kappa_j T_ij, Nyquist rows zeroed as for every odd
// multiplier, then the solenoidal projection.
SpectralVector forced_spectral(const std::array<ScalarField, 6>& t) {
  const BoxGrid& g = t[0].grid();
  std::array<SpectralScalar, 6> hat;
  for (int c = 0; c < 6; ++c) hat[c] = fft_forward(t[c]);
  SpectralVector f(g);
  const int n = g.n;
  static const int row[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  for (int mz = 0; mz < n; ++mz) {
    for (int my = 0; my < n; ++my) {
      for (int mx = 0; mx < n / 2 + 1; ++mx) {
        const bool nyq = (n % 2 == 0) && (mx == n / 2 || my == n / 2 || mz == n / 2);
        if (nyq) continue;
        const Vec3 kappa = wavevector(g, mx, my, mz);
        for (int i = 0; i < 3; ++i) {
          std::complex<double> acc = 0.0;
          for (int j = 0; j < 3; ++j) acc += kappa[j] * hat[row[i][j]].at(mx, my, mz);
          f.comp[i].at(mx, my, mz) = std::complex<double>(-acc.imag(), acc.real());
        }
      }
    }
  }
  leray_project(f);
  return f;
}

void spectral_axpy(SpectralVector& acc, double a, const SpectralVector& x) {
  for (int c = 0; c < 3; ++c) {
    std::complex<double>* dst = acc.comp[c].data();
    const std::complex<double>* src = x.comp[c].data();
    for (std::int64_t q = 0; q < acc.comp[c].size(); ++q) dst[q] += a * src[q];
  }
}

void spectral_scale(SpectralVector& v, double a) {
  for (int c = 0; c < 3; ++c) {
    std::complex<double>* dst = v.comp[c].data();
    for (std::int64_t q = 0; q < v.comp[c].size(); ++q) dst[q] *= a;
  }
}

double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

struct QuadNode {
  double tau = 0.0;
  double weight = 0.0;  // includes the 2 tau Jacobian factor
  double sigma = 0.0;
  int pre_cell = -1;  // index into the cached pre-cell data-flow fields
};

// The solution is split as b = d + c: d is the data heat flow represented by
// its co-scaled similarity profile (exactly scale-consistent, so nothing of
// the slow far field is lost to box periodization), and c is the Duhamel
// correction, which is quadratically small and spatially localized, the one
// part the fixed periodic box represents well.
struct CellSolver {
  const FundamentalData& data;
  BoxGrid box;
  MildParams prm;
  double lambda = 2.0, phi = 0.0, alpha = 0.0, period = 0.0;
  std::vector<double> times;            // t_i = lambda^(2 i / m), i < m
  ProfileTrajectory ud;                 // profile of the data heat flow, cell-periodic
  std::vector<VectorField> d;           // data flow at the cell times
  VectorField d_wrap;                   // data flow at t = lambda^2
  std::vector<std::vector<QuadNode>> quads;  // per cell time
  std::vector<VectorField> pre_cell_flow;    // data flow at quadrature sigma < 1
  std::vector<VectorField> c;           // correction iterate
  std::vector<VectorField> b;           // d + c, refreshed each sweep
  VectorField wrap_b;                   // cell-closing value of b
  std::vector<SpectralVector> fhat;     // P div (b x b) at cell times, then wrap

  CellSolver(const FundamentalData& b0, const BoxGrid& g, const MildParams& p)
      : data(b0), box(g), prm(p) {
    const SymmetrySpec& spec = b0.spec();
    spec.validate();
    lambda = spec.lambda;
    phi = spec.phi();
    alpha = spec.alpha;
    period = spec.period();
    if (prm.n_times < 4) throw std::invalid_argument("mild: need at least 4 time nodes");
    if (prm.panels < 1) throw std::invalid_argument("mild: need at least one panel");

    std::vector<double> s_nodes;
    for (int i = 0; i < prm.n_times; ++i) {
      times.push_back(std::pow(lambda, 2.0 * i / prm.n_times));
      s_nodes.push_back(std::log(times.back()));
    }
    ud = build_U0(b0, box, s_nodes);
    ud.set_period(period);  // the cell covers the continuous classes as well

    for (double t : times) d.push_back(data_flow_field(t));
    d_wrap = data_flow_field(lambda * lambda);

    quads.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double t = times[i];
      const double root = std::sqrt(t);
      for (int pan = 0; pan < prm.panels; ++pan) {
        const double a = root * pan / prm.panels;
        const double e = root * (pan + 1) / prm.panels;
        for (int gq = 0; gq < kGaussN; ++gq) {
          QuadNode qn;
          qn.tau = 0.5 * (a + e) + 0.5 * (e - a) * kGaussX[gq];
          qn.weight = (e - a) * kGaussW[gq] * qn.tau;  // 0.5 * w * 2 tau
          qn.sigma = t - qn.tau * qn.tau;
          if (!(qn.sigma > 0.0)) continue;
          if (qn.sigma < times.front()) {
            qn.pre_cell = int(pre_cell_flow.size());
            pre_cell_flow.push_back(data_flow_field(qn.sigma));
          }
          quads[i].push_back(qn);
        }
      }
    }

    c.assign(times.size(), VectorField(box));
    b = d;
  }

  // Data heat flow at any time > 0 through its similarity profile:
  //   v_d(x, sigma) = (1/sqrt(sigma)) R(theta) U_d(R(-theta) x / sqrt(sigma)),
  // theta = alpha log sigma, the profile wrapped modulo the cell period and
  // closed by the symmetric data extension where the argument leaves the
  // grid (the far field is data-dominated).
  VectorField data_flow_field(double sigma) const {
    const double s = std::log(sigma);
    const double root = std::sqrt(sigma);
    const double theta = alpha * s;
    const Mat3 rot = rotation_matrix(theta);
    const Mat3 unrot = rotation_matrix(-theta);
    const VectorField uf = ud.velocity_at(s);
    const double L = box.half_width;
    const double hull = L - box.spacing() * (1.0 + 1e-9);
    VectorField out(box);
    for (int kk = 0; kk < box.n; ++kk)
      for (int jj = 0; jj < box.n; ++jj)
        for (int ii = 0; ii < box.n; ++ii) {
          const Vec3 x = box.node(ii, jj, kk);
          const Vec3 y = unrot * x / root;
          Vec3 val;
          if (std::abs(y.x) <= hull && std::abs(y.y) <= hull && std::abs(y.z) <= hull)
            val = uf.sample(y);
          else if (norm2(y) > 0.0)
            val = data.evaluate(y);
          out.set_node_value(ii, jj, kk, rot * val / root);
        }
    return out;
  }

  // One application of the cell symmetry to gridded data, by sampling:
  //   (S f)(z) = (1/lambda) R(phi) f(R(-phi) z / lambda).
  VectorField cell_wrap(const VectorField& at_one) const {
    VectorField out(box);
    const Mat3 rot = rotation_matrix(phi);
    const Mat3 unrot = rotation_matrix(-phi);
    for (int k = 0; k < box.n; ++k)
      for (int j = 0; j < box.n; ++j)
        for (int i = 0; i < box.n; ++i) {
          const Vec3 z = box.node(i, j, k);
          out.set_node_value(i, j, k, rot * at_one.sample(unrot * z / lambda) / lambda);
        }
    return out;
  }

  // Bracket an in-cell time sigma in [1, lambda^2] by stored node indices,
  // index n_times meaning the wrap field; log-linear weight.
  void bracket(double sigma, int& j0, int& j1, double& w) const {
    const int m = int(times.size());
    if (sigma <= times.front()) {
      j0 = j1 = 0;
      w = 0.0;
      return;
    }
    for (int j = 1; j < m; ++j) {
      if (sigma <= times[std::size_t(j)]) {
        j0 = j - 1;
        j1 = j;
        w = std::log(sigma / times[std::size_t(j0)]) /
            std::log(times[std::size_t(j1)] / times[std::size_t(j0)]);
        return;
      }
    }
    j0 = m - 1;
    j1 = m;  // wrap
    const double top = lambda * lambda;
    w = std::log(sigma / times[std::size_t(j0)]) / std::log(top / times[std::size_t(j0)]);
    if (w > 1.0) w = 1.0;
  }

  // Full velocity at a pre-cell quadrature time: the cached data flow plus
  // the correction mapped through the cell symmetry (zero where the mapped
  // point leaves the box; the correction is localized).
  VectorField at_pre_cell_time(const QuadNode& qn, const VectorField& wrap_c) const {
    VectorField out = pre_cell_flow[std::size_t(qn.pre_cell)];
    const double sigma = qn.sigma;
    int k = int(std::ceil(-std::log(sigma) / (2.0 * std::log(lambda)) - 1e-12));
    if (k < 1) k = 1;
    double sp = std::pow(lambda, 2.0 * k) * sigma;
    while (sp >= lambda * lambda && k > 1) {
      sp /= lambda * lambda;
      --k;
    }
    while (sp < 1.0) {
      sp *= lambda * lambda;
      ++k;
    }
    int j0, j1;
    double w;
    bracket(sp, j0, j1, w);
    const VectorField& ca = c[std::size_t(j0)];
    const VectorField& cb = (j1 == int(times.size())) ? wrap_c : c[std::size_t(j1)];

    const double pre = std::pow(lambda, k);
    const Mat3 fwd = rotation_matrix(k * phi);
    const Mat3 bwd = rotation_matrix(-k * phi);
    const double L = box.half_width;
    const double hull = L - box.spacing() * (1.0 + 1e-9);
    for (int kk = 0; kk < box.n; ++kk)
      for (int jj = 0; jj < box.n; ++jj)
        for (int ii = 0; ii < box.n; ++ii) {
          const Vec3 z = fwd * box.node(ii, jj, kk) * pre;
          if (std::abs(z.x) <= hull && std::abs(z.y) <= hull && std::abs(z.z) <= hull) {
            const Vec3 v = ca.sample(z) * (1.0 - w) + cb.sample(z) * w;
            const std::int64_t idx = box.index(ii, jj, kk);
            out.set_node_value(idx, out.node_value(idx) + bwd * v * pre);
          }
        }
    return out;
  }

  // One Picard update of the correction; returns the sup over cell times of
  // the relative change of the full velocity.
  double sweep() {
    const VectorField wrap_c = cell_wrap(c[0]);
    wrap_b = d_wrap;
    wrap_b += wrap_c;
    fhat.clear();
    for (const VectorField& bi : b) fhat.push_back(forced_spectral(velocity_tensor(bi)));
    fhat.push_back(forced_spectral(velocity_tensor(wrap_b)));

    const int m = int(times.size());
    double delta = 0.0;
    std::vector<VectorField> c_new;
    c_new.reserve(m);
    for (int i = 0; i < m; ++i) {
      SpectralVector acc(box);
      for (const QuadNode& qn : quads[std::size_t(i)]) {
        SpectralVector g;
        if (qn.pre_cell < 0) {
          int j0, j1;
          double w;
          bracket(qn.sigma, j0, j1, w);
          g = fhat[std::size_t(j0)];
          if (j1 != j0 && w != 0.0) {
            spectral_scale(g, 1.0 - w);
            spectral_axpy(g, w, fhat[std::size_t(j1)]);
          }
        } else {
          g = forced_spectral(velocity_tensor(at_pre_cell_time(qn, wrap_c)));
        }
        heat_multiplier(g, qn.tau * qn.tau);
        spectral_axpy(acc, qn.weight, g);
      }
      VectorField ci(box);
      ci -= fft_inverse(acc);
      c_new.push_back(std::move(ci));
    }

    for (int i = 0; i < m; ++i) {
      VectorField bi = d[std::size_t(i)];
      bi += c_new[std::size_t(i)];
      VectorField diff = bi;
      diff -= b[std::size_t(i)];
      const double base = std::max(lp_norm(bi, 2.0), 1e-300);
      delta = std::max(delta, lp_norm(diff, 2.0) / base);
      b[std::size_t(i)] = std::move(bi);
    }
    c.swap(c_new);
    return delta;
  }
};

}  // namespace

MildResult solve_mild_cell(const FundamentalData& b0, const BoxGrid& box,
                           const BoxGrid& profile_grid, const MildParams& params) {
  CellSolver solver(b0, box, params);
  MildResult res;
  double prev = 0.0;
  for (int it = 0; it < params.max_iterations; ++it) {
    const double delta = solver.sweep();
    res.iterations = it + 1;
    res.last_update = delta;
    if (it > 0 && prev > 0.0) res.contraction = delta / prev;
    prev = delta;
    if (delta < params.tolerance) {
      res.converged = true;
      break;
    }
  }

  // Assemble the closed cell with its Riesz pressure.
  VectorField closing = solver.d_wrap;
  closing += solver.cell_wrap(solver.c[0]);
  const SliceFrame frame{1.0, 0.0};
  for (std::size_t i = 0; i < solver.times.size(); ++i)
    res.b.add_slice(solver.times[i], frame, solver.b[i],
                    riesz_pressure(velocity_tensor(solver.b[i])));
  res.b.add_slice(solver.lambda * solver.lambda, frame, closing,
                  riesz_pressure(velocity_tensor(closing)));

  // Profile on the requested grid, one node per stored cell time, periodic
  // with the cell period (valid for the continuous classes as well).
  const SymmetrySpec& spec = b0.spec();
  ProfileTrajectory traj(profile_grid, spec.alpha, spec.period());
  for (std::size_t i = 0; i < solver.times.size(); ++i) {
    const double t = solver.times[i];
    const double s = std::log(t);
    const double root = std::sqrt(t);
    const double theta = spec.alpha * s;
    const Mat3 rot = rotation_matrix(theta);
    const Mat3 unrot = rotation_matrix(-theta);
    VectorField u(profile_grid);
    ScalarField p(profile_grid);
    for (int kk = 0; kk < profile_grid.n; ++kk)
      for (int jj = 0; jj < profile_grid.n; ++jj)
        for (int ii = 0; ii < profile_grid.n; ++ii) {
          const Vec3 x = rot * profile_grid.node(ii, jj, kk) * root;
          u.set_node_value(ii, jj, kk, unrot * res.b.sample_slice(int(i), x) * root);
          p.at(ii, jj, kk) = t * res.b.sample_pressure_slice(int(i), x);
        }
    traj.add_node(s, std::move(u), std::move(p));
  }
  res.profile = std::move(traj);

  // Decay of ||b(t)||_p across the cell against the similarity exponent.
  // The norm is taken over a ball whose radius grows like sqrt(t), so the
  // measured region is fixed in similarity variables; a fixed box would
  // shed norm as its shrinking profile image crosses the far field.
  res.decay_target = -0.5 + 1.5 / params.decay_p;
  const double comoving = 0.9 * box.half_width / solver.lambda;
  std::vector<double> lx, ly;
  for (int i = 0; i < res.b.n_slices(); ++i) {
    const double t = res.b.slice(i).t;
    const double nv =
        lp_norm(res.b.slice(i).values, params.decay_p, shell(0.0, comoving * std::sqrt(t)));
    if (nv > 1e-300) {
      lx.push_back(std::log(t));
      ly.push_back(std::log(nv));
    }
  }
  if (lx.size() >= 2) res.decay_rate = fit_log_slope(lx, ly);
  return res;
}

}  // namespace lprf
