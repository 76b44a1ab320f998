#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "lprf/galerkin.hpp"

namespace lprf {

namespace {

double norm2_vec(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Non-stiff right side: full tensor contraction minus the exact diagonal.
void explicit_rhs(const GalerkinTensors& tns, const std::vector<double>& A,
                  const std::vector<double>& C, const std::vector<double>& b,
                  std::vector<double>& out) {
  const int k = tns.k;
  for (int j = 0; j < k; ++j) out[std::size_t(j)] = C[std::size_t(j)];
  for (int i = 0; i < k; ++i) {
    const double bi = b[std::size_t(i)];
    if (bi == 0.0) continue;
    const double* row = &A[std::size_t(i) * k];
    for (int j = 0; j < k; ++j) out[std::size_t(j)] += row[j] * bi;
  }
  for (int i = 0; i < k; ++i) {
    const double bi = b[std::size_t(i)];
    if (bi == 0.0) continue;
    for (int l = 0; l < k; ++l) {
      const double w = bi * b[std::size_t(l)];
      if (w == 0.0) continue;
      const double* row = &tns.B[(std::size_t(i) * k + std::size_t(l)) * k];
      for (int j = 0; j < k; ++j) out[std::size_t(j)] += row[j] * w;
    }
  }
  for (int j = 0; j < k; ++j) out[std::size_t(j)] -= tns.stiff[std::size_t(j)] * b[std::size_t(j)];
}

void check_finite(const std::vector<double>& b, double s) {
  for (double x : b)
    if (!std::isfinite(x) || std::abs(x) > 1e12)
      throw std::runtime_error("coefficient blow-up at s = " + std::to_string(s));
}

// Row-major dense solve by Gaussian elimination with partial pivoting;
// returns false when a pivot vanishes. M and r are consumed.
bool solve_dense(std::size_t w, std::vector<double>& M, std::vector<double>& r,
                 std::vector<double>& out) {
  std::vector<std::size_t> perm(w);
  for (std::size_t a = 0; a < w; ++a) perm[a] = a;
  for (std::size_t col = 0; col < w; ++col) {
    std::size_t piv = col;
    for (std::size_t rr = col + 1; rr < w; ++rr)
      if (std::abs(M[perm[rr] * w + col]) > std::abs(M[perm[piv] * w + col])) piv = rr;
    std::swap(perm[col], perm[piv]);
    const double d = M[perm[col] * w + col];
    if (d == 0.0) return false;
    for (std::size_t rr = col + 1; rr < w; ++rr) {
      const double fac = M[perm[rr] * w + col] / d;
      for (std::size_t cc = col; cc < w; ++cc)
        M[perm[rr] * w + cc] -= fac * M[perm[col] * w + cc];
      r[perm[rr]] -= fac * r[perm[col]];
    }
  }
  out.assign(w, 0.0);
  for (std::size_t col = w; col-- > 0;) {
    double acc = r[perm[col]];
    for (std::size_t cc = col + 1; cc < w; ++cc) acc -= M[perm[col] * w + cc] * out[cc];
    out[col] = acc / M[perm[col] * w + col];
  }
  return true;
}

}  // namespace

double stability_timestep(const GalerkinTensors& tns, double rho) {
  const int k = tns.k;
  double worst = 0.0;
  for (const std::vector<double>& A : tns.A) {
    for (int i = 0; i < k; ++i) {
      double row = 0.0;
      for (int j = 0; j < k; ++j) {
        double a = A[std::size_t(i) * k + std::size_t(j)];
        if (i == j) a -= tns.stiff[std::size_t(i)];  // stiff part handled exactly
        row += std::abs(a);
      }
      worst = std::max(worst, row);
    }
  }
  double cubic = 0.0;
  for (int i = 0; i < tns.k; ++i) {
    double row = 0.0;
    for (int l = 0; l < k; ++l)
      for (int j = 0; j < k; ++j)
        row += std::abs(tns.B[(std::size_t(i) * k + std::size_t(l)) * k + std::size_t(j)]);
    cubic = std::max(cubic, row * rho);
  }
  const double total = worst + cubic;
  return total > 0.0 ? 0.5 / total : 1.0;
}

CoeffTrajectory integrate_period(const GalerkinTensors& tns, const std::vector<double>& b0,
                                 double T, double dt) {
  if (int(b0.size()) != tns.k) throw std::invalid_argument("coefficient count mismatch");
  if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("period and step must be positive");
  const long long nsteps = std::llround(T / dt);
  if (nsteps < 1 || std::abs(nsteps * dt - T) > 1e-9 * T)
    throw std::invalid_argument("step must divide the period");

  const int k = tns.k;
  const std::size_t kz = std::size_t(k);
  std::vector<double> expfac(kz);
  for (int j = 0; j < k; ++j) expfac[std::size_t(j)] = std::exp(tns.stiff[std::size_t(j)] * dt);

  CoeffTrajectory traj;
  traj.s.reserve(std::size_t(nsteps) + 1);
  traj.b.reserve(std::size_t(nsteps) + 1);
  std::vector<double> b = b0;
  traj.s.push_back(0.0);
  traj.b.push_back(b);

  std::vector<double> A0, A1, C0, C1, k1(kz), k2(kz), btilde(kz);
  for (long long step = 0; step < nsteps; ++step) {
    const double s = step * dt;
    tns.A_at(s, A0);
    tns.C_at(s, C0);
    tns.A_at(s + dt, A1);
    tns.C_at(s + dt, C1);

    // Lawson integrating-factor Heun: exact exp for the stiff diagonal,
    // trapezoidal explicit part, second order overall.
    explicit_rhs(tns, A0, C0, b, k1);
    for (int j = 0; j < k; ++j)
      btilde[std::size_t(j)] =
          expfac[std::size_t(j)] * (b[std::size_t(j)] + dt * k1[std::size_t(j)]);
    explicit_rhs(tns, A1, C1, btilde, k2);
    for (int j = 0; j < k; ++j)
      b[std::size_t(j)] = expfac[std::size_t(j)] * b[std::size_t(j)] +
                          0.5 * dt * (expfac[std::size_t(j)] * k1[std::size_t(j)] +
                                      k2[std::size_t(j)]);
    check_finite(b, s + dt);
    traj.s.push_back((step + 1) * dt);
    traj.b.push_back(b);
  }
  return traj;
}

FixedPointResult periodic_fixed_point(
    const std::function<std::vector<double>(const std::vector<double>&)>& period_map,
    const std::vector<double>& b0, double rho, double tol, int max_iter, double theta0) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("need at least one iteration");
  if (!(theta0 > 0.0) || theta0 > 1.0)
    throw std::invalid_argument("initial damping must lie in (0, 1]");

  FixedPointResult res;
  res.rho = rho;
  res.ball_certified = true;
  double theta = theta0;
  const std::size_t n = b0.size();

  // Every map evaluation doubles as a ball-invariance probe.
  const auto eval = [&](const std::vector<double>& x) {
    std::vector<double> tx = period_map(x);
    if (rho > 0.0 && norm2_vec(x) <= rho) {
      const double image = norm2_vec(tx);
      res.max_image_norm = std::max(res.max_image_norm, image);
      if (image > rho) res.ball_certified = false;
    }
    return tx;
  };

  std::vector<double> b = b0;
  std::vector<double> f(n);
  double r = 0.0;
  bool have_f = false;

  // Phase 1: damped Picard with Anderson acceleration. Good from far away,
  // but it cannot close the last digits when the period map expands along
  // some direction: (1 - theta) + theta mu > 1 for any damping once mu > 1.
  std::deque<std::vector<double>> hist_b, hist_f;
  double prev_res = -1.0, best_res = -1.0;
  int best_it = 0;
  const int picard_cap = std::max(12, max_iter / 4);

  for (int it = 0; it < picard_cap && res.iterations < max_iter; ++it) {
    std::vector<double> tb = eval(b);
    for (std::size_t q = 0; q < n; ++q) f[q] = tb[q] - b[q];
    r = norm2_vec(f);
    have_f = true;
    res.iterations += 1;
    res.residual = r;
    res.theta_final = theta;

    if (r < tol) {
      res.b = b;
      res.converged = true;
      return res;
    }

    if (best_res < 0.0 || r < 0.5 * best_res) {
      best_res = (best_res < 0.0) ? r : std::min(best_res, r);
      best_it = it;
    }
    if (it - best_it >= 8) break;  // stalled: hand over to Newton

    if (prev_res >= 0.0 && r > prev_res) {
      theta = std::max(theta * 0.5, 1.0 / 64.0);
      hist_b.clear();
      hist_f.clear();
    }
    prev_res = r;

    hist_b.push_back(b);
    hist_f.push_back(f);
    while (hist_b.size() > 6) {
      hist_b.pop_front();
      hist_f.pop_front();
    }

    std::vector<double> next;
    const std::size_t mhist = hist_b.size();
    if (mhist >= 2) {
      // Anderson step: least squares on the residual differences.
      const std::size_t w = mhist - 1;
      std::vector<std::vector<double>> dF(w, std::vector<double>(n)), dB(w, std::vector<double>(n));
      for (std::size_t c = 0; c < w; ++c)
        for (std::size_t q = 0; q < n; ++q) {
          dF[c][q] = hist_f[c + 1][q] - hist_f[c][q];
          dB[c][q] = hist_b[c + 1][q] - hist_b[c][q];
        }
      std::vector<double> gram(w * w, 0.0), rhs(w, 0.0), gamma;
      for (std::size_t a = 0; a < w; ++a) {
        for (std::size_t c = 0; c < w; ++c)
          for (std::size_t q = 0; q < n; ++q) gram[a * w + c] += dF[a][q] * dF[c][q];
        for (std::size_t q = 0; q < n; ++q) rhs[a] += dF[a][q] * f[q];
      }
      double ridge = 0.0;
      for (std::size_t a = 0; a < w; ++a) ridge = std::max(ridge, gram[a * w + a]);
      ridge = ridge * 1e-12 + 1e-300;
      for (std::size_t a = 0; a < w; ++a) gram[a * w + a] += ridge;
      if (solve_dense(w, gram, rhs, gamma)) {
        next.assign(n, 0.0);
        for (std::size_t q = 0; q < n; ++q) {
          double corr = 0.0;
          for (std::size_t c = 0; c < w; ++c) corr += (dB[c][q] + theta * dF[c][q]) * gamma[c];
          next[q] = b[q] + theta * f[q] - corr;
        }
      }
    }
    if (next.empty()) {
      next.assign(n, 0.0);
      for (std::size_t q = 0; q < n; ++q) next[q] = b[q] + theta * f[q];
    }
    b = std::move(next);
    have_f = false;
  }

  // Phase 2: Newton on g(b) = T(b) - b with a forward-difference Jacobian
  // and residual backtracking; indifferent to expanding map directions.
  if (!have_f) {
    std::vector<double> tb = eval(b);
    for (std::size_t q = 0; q < n; ++q) f[q] = tb[q] - b[q];
    r = norm2_vec(f);
    res.iterations += 1;
    res.residual = r;
    if (r < tol) {
      res.b = b;
      res.converged = true;
      return res;
    }
  }

  while (res.iterations < max_iter) {
    std::vector<double> J(n * n, 0.0);
    std::vector<double> probe = b;
    for (std::size_t col = 0; col < n; ++col) {
      const double h = 1.4901161193847656e-8 * (1.0 + std::abs(b[col]));
      probe[col] = b[col] + h;
      const std::vector<double> tp = eval(probe);
      probe[col] = b[col];
      for (std::size_t row = 0; row < n; ++row) {
        const double gp = tp[row] - probe[row] - ((row == col) ? h : 0.0);
        J[row * n + col] = (gp - f[row]) / h;
      }
    }
    std::vector<double> rhs(n), step;
    for (std::size_t q = 0; q < n; ++q) rhs[q] = -f[q];
    if (!solve_dense(n, J, rhs, step)) break;

    bool accepted = false;
    double scale = 1.0;
    for (int bt = 0; bt < 8 && !accepted; ++bt, scale *= 0.5) {
      std::vector<double> cand(n);
      for (std::size_t q = 0; q < n; ++q) cand[q] = b[q] + scale * step[q];
      const std::vector<double> tc = eval(cand);
      std::vector<double> fc(n);
      for (std::size_t q = 0; q < n; ++q) fc[q] = tc[q] - cand[q];
      const double rc = norm2_vec(fc);
      if (rc < r) {
        b = std::move(cand);
        f = std::move(fc);
        r = rc;
        accepted = true;
      }
    }
    res.iterations += 1;
    res.residual = r;
    if (!accepted) break;  // no descent along the Newton direction
    if (r < tol) {
      res.b = b;
      res.converged = true;
      return res;
    }
  }
  res.b = b;
  res.converged = false;
  return res;
}

GalerkinState solve_periodic_galerkin(const Basis& basis, const GalerkinTensors& tns, double T,
                                      const GalerkinParams& params) {
  if (!(T > 0.0)) throw std::invalid_argument("period must be positive");
  if (basis.size() != tns.k) throw std::invalid_argument("basis does not match the assembly");
  GalerkinState st;
  st.k = tns.k;
  st.eps = tns.eps;

  // Step from the stability bound, snapped so it divides the period.
  double dt = params.dt;
  std::vector<double> zero(std::size_t(tns.k), 0.0);
  if (!(dt > 0.0)) {
    const double bound = stability_timestep(tns, 1.0);
    const long long nsteps = std::max<long long>(8, std::llround(std::ceil(T / bound)));
    dt = T / double(nsteps);
  } else {
    const long long nsteps = std::max<long long>(1, std::llround(std::ceil(T / dt - 1e-12)));
    dt = T / double(nsteps);
  }
  st.dt = dt;

  const auto period_map = [&](const std::vector<double>& b0) {
    return integrate_period(tns, b0, T, dt).b.back();
  };

  // Ball radius from a trial orbit out of rest unless configured.
  double rho = params.rho;
  if (!(rho > 0.0)) {
    const CoeffTrajectory trial = integrate_period(tns, zero, T, dt);
    double sup = 0.0;
    for (const std::vector<double>& bn : trial.b) {
      double s2 = 0.0;
      for (double x : bn) s2 += x * x;
      sup = std::max(sup, std::sqrt(s2));
    }
    rho = 2.0 * sup + 1e-12;
  }

  st.fp = periodic_fixed_point(period_map, zero, rho, params.fp_tol, params.fp_max_iter,
                               params.fp_damping);
  st.coeffs = integrate_period(tns, st.fp.b, T, dt);

  for (std::size_t nn = 0; nn < st.coeffs.b.size(); ++nn) {
    const std::vector<double>& bn = st.coeffs.b[nn];
    double l2 = 0.0, h1 = 0.0;
    for (int j = 0; j < tns.k; ++j) {
      l2 += bn[std::size_t(j)] * bn[std::size_t(j)];
      h1 += -tns.stiff[std::size_t(j)] * bn[std::size_t(j)] * bn[std::size_t(j)];
    }
    st.energy_linf = std::max(st.energy_linf, std::sqrt(l2));
    // trapezoidal in s for the dissipation integral
    const double wq = (nn == 0 || nn + 1 == st.coeffs.b.size()) ? 0.5 : 1.0;
    st.energy_l2h1 += wq * dt * h1;
  }
  st.energy_l2h1 = std::sqrt(std::max(st.energy_l2h1, 0.0));
  st.combined_norm = st.energy_linf + st.energy_l2h1;
  return st;
}

ProfileTrajectory galerkin_profile(const Basis& basis, const CoeffTrajectory& orbit, double alpha,
                                   double period, int max_nodes) {
  if (orbit.s.empty()) throw std::invalid_argument("empty coefficient trajectory");
  ProfileTrajectory traj(basis.grid(), alpha, period);
  const std::size_t total = orbit.s.size();
  std::size_t stride = 1;
  if (max_nodes > 1 && total > std::size_t(max_nodes))
    stride = (total + std::size_t(max_nodes) - 1) / std::size_t(max_nodes);
  for (std::size_t i = 0; i < total; i += stride) {
    // the closing node duplicates s = 0 modulo the period
    if (period > 0.0 && i + 1 == total) break;
    traj.add_node(orbit.s[i], basis.synthesize(orbit.b[i]));
  }
  return traj;
}

}  // namespace lprf
