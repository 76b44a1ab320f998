#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "lprf/diagnostics.hpp"
#include "lprf/spectral.hpp"

namespace lprf {

namespace {

// Quintic falloff: 1 on [0, 1/2], 0 on [1, inf), C2 across both joints.
double fall(double u) {
  if (u <= 0.5) return 1.0;
  if (u >= 1.0) return 0.0;
  const double tau = 2.0 * u - 1.0;
  return 1.0 - tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau));
}

double fall_d(double u) {
  if (u <= 0.5 || u >= 1.0) return 0.0;
  const double tau = 2.0 * u - 1.0;
  const double om = 1.0 - tau;
  return -60.0 * tau * tau * om * om;
}

double fall_dd(double u) {
  if (u <= 0.5 || u >= 1.0) return 0.0;
  const double tau = 2.0 * u - 1.0;
  return -240.0 * tau * (1.0 - tau) * (1.0 - 2.0 * tau);
}

ScalarField component_copy(const VectorField& v, int c) {
  ScalarField out(v.grid());
  std::copy(v.data(c), v.data(c) + v.size(), out.data());
  return out;
}

// Lattice-coordinate jacobian rows: jac[c] holds grad of component c.
std::array<VectorField, 3> lattice_jacobian(const VectorField& v) {
  return {spectral_gradient(component_copy(v, 0)), spectral_gradient(component_copy(v, 1)),
          spectral_gradient(component_copy(v, 2))};
}

double frobenius2(const std::array<VectorField, 3>& jac, std::int64_t q) {
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) acc += norm2(jac[std::size_t(c)].node_value(q));
  return acc;
}

struct PreparedSlice {
  double t = 0.0;
  SliceFrame frame;
  const VectorField* values = nullptr;
  const ScalarField* pressure = nullptr;
  std::array<VectorField, 3> jac;  // lattice-coordinate gradients
  Mat3 rot;                        // frame rotation
};

// FFT-bearing preparation, serial by construction.
std::vector<PreparedSlice> prepare(const PhysicalField& v) {
  std::vector<PreparedSlice> out;
  out.reserve(std::size_t(v.n_slices()));
  for (int i = 0; i < v.n_slices(); ++i) {
    const Slice& sl = v.slice(i);
    PreparedSlice p;
    p.t = sl.t;
    p.frame = sl.frame;
    p.values = &sl.values;
    p.pressure = sl.has_pressure() ? &sl.pressure : nullptr;
    p.jac = lattice_jacobian(sl.values);
    p.rot = rotation_matrix(sl.frame.theta);
    out.push_back(std::move(p));
  }
  return out;
}

// Perturbation slice matched by time, or nullptr when g is absent.
const PreparedSlice* matched_slice(const std::vector<PreparedSlice>& g, double t) {
  for (const PreparedSlice& p : g)
    if (std::abs(p.t - t) <= 1e-9 * std::max(1.0, t)) return &p;
  return nullptr;
}

// Physical value and physical-coordinate jacobian of a prepared slice at a
// physical point (throws std::domain_error outside the lattice hull).
Vec3 sample_value(const PreparedSlice& p, const Vec3& x) {
  const Vec3 u = p.frame.to_lattice(x);
  return p.rot * p.values->sample(u) * (1.0 / p.frame.scale);
}

Mat3 sample_jacobian(const PreparedSlice& p, const Vec3& x) {
  const Vec3 u = p.frame.to_lattice(x);
  Mat3 jl;
  for (int c = 0; c < 3; ++c) {
    const Vec3 row = p.jac[std::size_t(c)].sample(u);
    for (int d = 0; d < 3; ++d) jl(c, d) = row[d];
  }
  const Mat3 rt = p.rot.transpose();
  return p.rot * jl * rt * (1.0 / (p.frame.scale * p.frame.scale));
}

LocalEnergyTestCase assemble_physical(const std::vector<PreparedSlice>& vs,
                                      const std::vector<PreparedSlice>* gs,
                                      const TestFunction& phi) {
  const int ns = int(vs.size());
  std::vector<double> lhs_t(std::size_t(ns), 0.0), rhs_t(std::size_t(ns), 0.0);

  for (int i = 0; i < ns; ++i) {
    const PreparedSlice& p = vs[std::size_t(i)];
    const BoxGrid& g = p.values->grid();
    const double scale = p.frame.scale;
    const double w = std::pow(scale * g.spacing(), 3);  // physical dx
    const PreparedSlice* gp = nullptr;
    double lhs = 0.0, rhs = 0.0;

    for (int k = 0; k < g.n; ++k)
      for (int j = 0; j < g.n; ++j)
        for (int ii = 0; ii < g.n; ++ii) {
          const Vec3 x = p.frame.to_physical(g.node(ii, j, k));
          const double ph = phi.value(x, p.t);
          const Vec3 gph = phi.grad(x, p.t);
          const double par = phi.dt(x, p.t) + phi.lap(x, p.t);
          const bool active = ph != 0.0 || par != 0.0 || norm2(gph) != 0.0;
          if (!active) continue;
          const bool edge =
              ii == 0 || j == 0 || k == 0 || ii == g.n - 1 || j == g.n - 1 || k == g.n - 1;
          if (edge)
            throw std::invalid_argument("test function support touches the slice boundary");
          if (i == 0 || i == ns - 1)
            throw std::invalid_argument(
                "test function must vanish at the first and last stored times");

          const std::int64_t q = g.index(ii, j, k);
          const Vec3 uval = p.values->node_value(q);
          const Vec3 vphys = p.rot * uval * (1.0 / scale);
          const double v2 = norm2(uval) / (scale * scale);
          const double grad2 = frobenius2(p.jac, q) / std::pow(scale, 4);
          const double pr = (*p.pressure)[q] / (scale * scale);

          lhs += 2.0 * grad2 * ph;
          rhs += v2 * par + (v2 + 2.0 * pr) * dot(vphys, gph);
          if (gs != nullptr) {
            if (gp == nullptr) {
              gp = matched_slice(*gs, p.t);
              if (gp == nullptr)
                throw std::invalid_argument("perturbation slices must match the solution times");
            }
            const Vec3 gval = sample_value(*gp, x);
            const Vec3 vdotgradg = sample_jacobian(*gp, x) * vphys;
            rhs += v2 * dot(gval, gph) - 2.0 * dot(vdotgradg, vphys) * ph;
          }
        }
    lhs_t[std::size_t(i)] = lhs * w;
    rhs_t[std::size_t(i)] = rhs * w;
  }

  LocalEnergyTestCase res;
  for (int i = 0; i + 1 < ns; ++i) {
    const double dt = vs[std::size_t(i) + 1].t - vs[std::size_t(i)].t;
    res.lhs += 0.5 * dt * (lhs_t[std::size_t(i)] + lhs_t[std::size_t(i) + 1]);
    res.rhs += 0.5 * dt * (rhs_t[std::size_t(i)] + rhs_t[std::size_t(i) + 1]);
  }
  res.slack = res.rhs - res.lhs;
  return res;
}

// Node-interpolated profile state: bracketing of the trajectory's own
// interpolation, reproduced here so that precomputed node jacobians can be
// interpolated without re-running FFTs per quadrature point.
struct ProfileNodes {
  const ProfileTrajectory* traj = nullptr;
  std::vector<std::array<VectorField, 3>> jac;

  void bracket(double s, int& i0, int& i1, double& w) const {
    const int m = traj->n_nodes();
    if (m == 1) {
      i0 = i1 = 0;
      w = 0.0;
      return;
    }
    const double T = traj->period();
    double sq = s;
    const double s0 = traj->s_node(0), sb = traj->s_node(m - 1);
    if (T > 0.0) {
      sq = s - T * std::floor((s - s0) / T);
      if (sq >= sb) {  // seam between the last and first node
        i0 = m - 1;
        i1 = 0;
        const double gap = T - (sb - s0);
        w = gap > 0.0 ? (sq - sb) / gap : 0.0;
        return;
      }
    } else if (sq < s0 - 1e-12 || sq > sb + 1e-12) {
      throw std::invalid_argument("test function window leaves the stored profile range");
    }
    int lo = 0;
    while (lo + 2 < m && traj->s_node(lo + 1) <= sq) ++lo;
    i0 = lo;
    i1 = lo + 1;
    const double d = traj->s_node(i1) - traj->s_node(i0);
    w = d > 0.0 ? (sq - traj->s_node(i0)) / d : 0.0;
    w = std::min(std::max(w, 0.0), 1.0);
  }
};

ProfileNodes prepare_profile(const ProfileTrajectory& traj) {
  ProfileNodes out;
  out.traj = &traj;
  out.jac.reserve(std::size_t(traj.n_nodes()));
  for (int i = 0; i < traj.n_nodes(); ++i) out.jac.push_back(lattice_jacobian(traj.velocity(i)));
  return out;
}

LocalEnergyTestCase assemble_profile(const ProfileNodes& an, const ProfileNodes* bn,
                                     const TestFunction& psi, double s_lo, double s_hi,
                                     int n_quad) {
  const ProfileTrajectory& A = *an.traj;
  const BoxGrid& g = A.grid();
  const double w3 = std::pow(g.spacing(), 3);
  std::vector<double> lhs_s(std::size_t(n_quad), 0.0), rhs_s(std::size_t(n_quad), 0.0);
  const double ds = (s_hi - s_lo) / (n_quad - 1);

  for (int m = 0; m < n_quad; ++m) {
    const double s = s_lo + ds * m;
    int a0, a1, b0 = 0, b1 = 0;
    double aw, bw = 0.0;
    an.bracket(s, a0, a1, aw);
    if (bn != nullptr) bn->bracket(s, b0, b1, bw);
    double lhs = 0.0, rhs = 0.0;

    for (int k = 0; k < g.n; ++k)
      for (int j = 0; j < g.n; ++j)
        for (int ii = 0; ii < g.n; ++ii) {
          const Vec3 y = g.node(ii, j, k);
          const double ph = psi.value(y, s);
          const Vec3 gph = psi.grad(y, s);
          const double par = psi.dt(y, s) + psi.lap(y, s);
          if (ph == 0.0 && par == 0.0 && norm2(gph) == 0.0) continue;
          if (ii == 0 || j == 0 || k == 0 || ii == g.n - 1 || j == g.n - 1 || k == g.n - 1)
            throw std::invalid_argument("test function support touches the lattice boundary");
          if (m == 0 || m == n_quad - 1)
            throw std::invalid_argument("test function must vanish at the window endpoints");

          const std::int64_t q = g.index(ii, j, k);
          const Vec3 av =
              A.velocity(a0).node_value(q) * (1.0 - aw) + A.velocity(a1).node_value(q) * aw;
          const double a2 = norm2(av);
          const double pr = A.pressure(a0)[q] * (1.0 - aw) + A.pressure(a1)[q] * aw;
          double grad2 = 0.0;
          for (int c = 0; c < 3; ++c) {
            const Vec3 row = an.jac[std::size_t(a0)][std::size_t(c)].node_value(q) * (1.0 - aw) +
                             an.jac[std::size_t(a1)][std::size_t(c)].node_value(q) * aw;
            grad2 += norm2(row);
          }

          Vec3 flux = av - y * 0.5;
          Vec3 coupling{};
          if (bn != nullptr) {
            const ProfileTrajectory& B = *bn->traj;
            const Vec3 bv =
                B.velocity(b0).node_value(q) * (1.0 - bw) + B.velocity(b1).node_value(q) * bw;
            flux += bv;
            for (int c = 0; c < 3; ++c) {
              const Vec3 row =
                  bn->jac[std::size_t(b0)][std::size_t(c)].node_value(q) * (1.0 - bw) +
                  bn->jac[std::size_t(b1)][std::size_t(c)].node_value(q) * bw;
              coupling[c] = dot(row, av);  // (A . grad B)_c
            }
          }

          lhs += (2.0 * grad2 + 0.5 * a2) * ph;
          rhs += a2 * par + dot(flux * a2 + av * (2.0 * pr), gph) -
                 2.0 * dot(coupling, av) * ph;
        }
    lhs_s[std::size_t(m)] = lhs * w3;
    rhs_s[std::size_t(m)] = rhs * w3;
  }

  LocalEnergyTestCase res;
  for (int m = 0; m + 1 < n_quad; ++m) {
    res.lhs += 0.5 * ds * (lhs_s[std::size_t(m)] + lhs_s[std::size_t(m) + 1]);
    res.rhs += 0.5 * ds * (rhs_s[std::size_t(m)] + rhs_s[std::size_t(m) + 1]);
  }
  res.slack = res.rhs - res.lhs;
  return res;
}

}  // namespace

TestFunction bump_test_function(const BumpSpec& spec) {
  TestFunction tf;
  const BumpSpec b = spec;
  const auto space = [b](const Vec3& x) {
    return fall(norm(x - b.center) / b.radius);
  };
  const auto timef = [b](double t) { return fall(std::abs(t - b.t_center) / b.t_radius); };
  tf.value = [space, timef](const Vec3& x, double t) { return space(x) * timef(t); };
  tf.dt = [b, space](const Vec3& x, double t) {
    const double ut = std::abs(t - b.t_center) / b.t_radius;
    const double sgn = (t >= b.t_center) ? 1.0 : -1.0;
    return space(x) * fall_d(ut) * sgn / b.t_radius;
  };
  tf.grad = [b, timef](const Vec3& x, double t) {
    const Vec3 d = x - b.center;
    const double r = norm(d);
    const double u = r / b.radius;
    const double fd = fall_d(u);
    if (fd == 0.0 || r == 0.0) return Vec3{};
    return d * (fd / (b.radius * r) * timef(t));
  };
  tf.lap = [b, timef](const Vec3& x, double t) {
    const double u = norm(x - b.center) / b.radius;
    if (u <= 0.5 || u >= 1.0) return 0.0;
    return (fall_dd(u) + 2.0 * fall_d(u) / u) / (b.radius * b.radius) * timef(t);
  };
  return tf;
}

std::vector<BumpSpec> bump_battery(double half_width, double t_lo, double t_hi, unsigned seed,
                                   double margin) {
  if (!(half_width > 0.0) || !(t_hi > t_lo))
    throw std::invalid_argument("battery needs a positive box and time window");
  if (margin <= 0.0) margin = 0.08 * half_width;
  if (!(margin < 0.5 * half_width))
    throw std::invalid_argument("battery margin must be below half the box half width");
  const double scales[3] = {0.20, 0.30, 0.42};
  const double tfrac[3] = {0.45, 0.65, 0.85};
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<BumpSpec> out;
  for (int si = 0; si < 3; ++si) {
    const double radius = scales[si] * half_width;
    const double cmax = std::max(0.0, half_width - radius - margin);
    for (int ci = 0; ci < 4; ++ci) {
      BumpSpec b;
      b.center = Vec3{uni(rng) * cmax, uni(rng) * cmax, uni(rng) * cmax};
      b.radius = radius;
      b.t_center = 0.5 * (t_lo + t_hi);
      b.t_radius = tfrac[si] * 0.5 * (t_hi - t_lo);
      out.push_back(b);
    }
  }
  return out;
}

LocalEnergyTestCase local_energy_check(const PhysicalField& v, const TestFunction& phi,
                                       const PhysicalField* perturbation) {
  if (v.empty()) throw std::invalid_argument("empty field");
  if (!v.has_pressure()) throw std::invalid_argument("local energy check needs a pressure");
  const std::vector<PreparedSlice> vs = prepare(v);
  std::vector<PreparedSlice> gs;
  const bool has_g = perturbation != nullptr && !perturbation->empty();
  if (has_g) gs = prepare(*perturbation);
  return assemble_physical(vs, has_g ? &gs : nullptr, phi);
}

LocalEnergyTestCase local_energy_check_profile(const ProfileTrajectory& A,
                                               const TestFunction& psi, double s_lo, double s_hi,
                                               int n_quad, const ProfileTrajectory* background) {
  if (A.empty()) throw std::invalid_argument("empty profile");
  if (!A.has_pressure()) throw std::invalid_argument("local energy check needs a pressure");
  if (n_quad < 3 || !(s_hi > s_lo)) throw std::invalid_argument("bad quadrature window");
  const ProfileNodes an = prepare_profile(A);
  ProfileNodes bn;
  const bool has_b = background != nullptr && !background->empty();
  if (has_b) {
    if (background->grid() != A.grid())
      throw std::invalid_argument("background grid does not match the profile");
    bn = prepare_profile(*background);
  }
  return assemble_profile(an, has_b ? &bn : nullptr, psi, s_lo, s_hi, n_quad);
}

std::vector<LocalEnergyTestCase> local_energy_battery(const PhysicalField& v,
                                                      const std::vector<BumpSpec>& bumps,
                                                      const PhysicalField* perturbation,
                                                      int threads) {
  if (v.empty()) throw std::invalid_argument("empty field");
  if (!v.has_pressure()) throw std::invalid_argument("local energy check needs a pressure");
  const std::vector<PreparedSlice> vs = prepare(v);
  std::vector<PreparedSlice> gs;
  const bool has_g = perturbation != nullptr && !perturbation->empty();
  if (has_g) gs = prepare(*perturbation);
  const std::vector<PreparedSlice>* gptr = has_g ? &gs : nullptr;

  std::vector<LocalEnergyTestCase> out(bumps.size());
  const auto run_one = [&](std::size_t i) {
    out[i] = assemble_physical(vs, gptr, bump_test_function(bumps[i]));
    out[i].bump = bumps[i];
  };
  if (threads > 1) {
    std::vector<std::future<void>> futs;
    futs.reserve(bumps.size());
    for (std::size_t i = 0; i < bumps.size(); ++i)
      futs.push_back(std::async(std::launch::async, run_one, i));
    for (std::future<void>& f : futs) f.get();
  } else {
    for (std::size_t i = 0; i < bumps.size(); ++i) run_one(i);
  }
  return out;
}

double global_energy_check(const PhysicalField& v, const VectorField& v0) {
  if (v.empty()) throw std::invalid_argument("empty field");
  const double h0 = v0.grid().spacing();
  double data = 0.0;
  for (std::int64_t q = 0; q < v0.size(); ++q) data += norm2(v0.node_value(q));
  data *= h0 * h0 * h0;

  std::vector<double> energy(std::size_t(v.n_slices()), 0.0);
  std::vector<double> dissipation(std::size_t(v.n_slices()), 0.0);
  for (int i = 0; i < v.n_slices(); ++i) {
    const Slice& sl = v.slice(i);
    const double h = sl.values.grid().spacing();
    const double scale = sl.frame.scale;
    double e = 0.0;
    for (std::int64_t q = 0; q < sl.values.size(); ++q) e += norm2(sl.values.node_value(q));
    energy[std::size_t(i)] = e * h * h * h * scale;  // scale^3 dx, 1/scale^2 values

    const std::array<VectorField, 3> jac = lattice_jacobian(sl.values);
    double d = 0.0;
    for (std::int64_t q = 0; q < sl.values.size(); ++q) d += frobenius2(jac, q);
    dissipation[std::size_t(i)] = 2.0 * d * h * h * h / scale;
  }
  // running energy-plus-dissipation, an identity for the pure heat flow
  double worst = energy[0];
  double diss = 0.0;
  for (int i = 0; i + 1 < v.n_slices(); ++i) {
    diss += 0.5 * (v.slice(i + 1).t - v.slice(i).t) *
            (dissipation[std::size_t(i)] + dissipation[std::size_t(i) + 1]);
    worst = std::max(worst, energy[std::size_t(i) + 1] + diss);
  }
  return data - worst;
}

AprioriBoundReport apriori_bound_check(const PhysicalField& v, const VectorField& v0, double r,
                                       double c0) {
  if (!(r > 0.0) || !(c0 > 0.0)) throw std::invalid_argument("radius and constant must be positive");
  if (v.empty()) throw std::invalid_argument("empty field");
  AprioriBoundReport rep;
  rep.r = r;
  rep.c0 = c0;

  // Data constant: sup over grid centers of the ball energy, periodic
  // minimal-image metric on the data's own box.
  {
    const BoxGrid& g = v0.grid();
    const double h = g.spacing();
    const double span = 2.0 * g.half_width;
    std::vector<std::array<int, 3>> offs;
    // window capped so every lattice residue appears at most once
    const int reach = std::min((g.n - 1) / 2, int(std::floor(r / h)) + 1);
    for (int dk = -reach; dk <= reach; ++dk)
      for (int dj = -reach; dj <= reach; ++dj)
        for (int di = -reach; di <= reach; ++di) {
          double dx = std::abs(di) * h, dy = std::abs(dj) * h, dz = std::abs(dk) * h;
          dx = std::min(dx, span - dx);
          dy = std::min(dy, span - dy);
          dz = std::min(dz, span - dz);
          if (dx * dx + dy * dy + dz * dz <= r * r) offs.push_back({di, dj, dk});
        }
    const auto wrap = [&](int i) { return ((i % g.n) + g.n) % g.n; };
    int cstride = 1;
    while ((g.n / cstride) > 32) cstride *= 2;
    double best = 0.0;
    for (int k = 0; k < g.n; k += cstride)
      for (int j = 0; j < g.n; j += cstride)
        for (int i = 0; i < g.n; i += cstride) {
          double e = 0.0;
          for (const std::array<int, 3>& o : offs)
            e += norm2(v0.node_value(wrap(i + o[0]), wrap(j + o[1]), wrap(k + o[2])));
          best = std::max(best, e);
        }
    rep.a_r = 0.5 * best * h * h * h;
  }

  rep.sigma = (rep.a_r > 0.0) ? c0 * std::min(r * r / (rep.a_r * rep.a_r), 1.0) : c0;
  rep.horizon = rep.sigma * r * r;

  // Slices inside the horizon; the last stored slice may fall short.
  int used = 0;
  while (used < v.n_slices() && v.slice(used).t <= rep.horizon * (1.0 + 1e-12)) ++used;
  rep.truncated = (used == v.n_slices()) && (v.t_max() < rep.horizon * (1.0 - 1e-12));
  if (used == 0) {
    rep.truncated = true;
    rep.ratio = 0.0;
    return rep;
  }

  // Physical centers from the first slice's lattice, strided to cap work.
  const BoxGrid& g0 = v.slice(0).values.grid();
  int stride = 1;
  while ((g0.n / stride) > 16) stride *= 2;
  rep.center_stride = stride;
  std::vector<Vec3> centers;
  for (int k = 0; k < g0.n; k += stride)
    for (int j = 0; j < g0.n; j += stride)
      for (int i = 0; i < g0.n; i += stride)
        centers.push_back(v.slice(0).frame.to_physical(g0.node(i, j, k)));

  // Per slice, per center: ball energy and ball dissipation by windowed
  // lattice sums (periodic wrap on the slice's own box).
  std::vector<std::vector<double>> ball_diss(std::size_t(used),
                                             std::vector<double>(centers.size(), 0.0));
  double sup_energy = 0.0;
  for (int si = 0; si < used; ++si) {
    const Slice& sl = v.slice(si);
    const BoxGrid& g = sl.values.grid();
    const double h = g.spacing();
    const double scale = sl.frame.scale;
    const double span = 2.0 * g.half_width;
    const double rl = r / scale;  // ball radius in lattice units
    const std::array<VectorField, 3> jac = lattice_jacobian(sl.values);
    // window of 2 reach + 2 nodes covers each residue at most once
    const int reach = std::min((g.n - 2) / 2, int(std::floor(rl / h)) + 1);
    const auto wrap = [&](int i) { return ((i % g.n) + g.n) % g.n; };

    for (std::size_t ci = 0; ci < centers.size(); ++ci) {
      const Vec3 uc = sl.frame.to_lattice(centers[ci]);
      const int bi = int(std::floor((uc.x + g.half_width) / h));
      const int bj = int(std::floor((uc.y + g.half_width) / h));
      const int bk = int(std::floor((uc.z + g.half_width) / h));
      double e = 0.0, d = 0.0;
      for (int dk = -reach; dk <= reach + 1; ++dk)
        for (int dj = -reach; dj <= reach + 1; ++dj)
          for (int di = -reach; di <= reach + 1; ++di) {
            const int i = bi + di, j = bj + dj, k = bk + dk;
            double dx = std::abs(g.coord(0) + (i)*h - uc.x);
            double dy = std::abs(g.coord(0) + (j)*h - uc.y);
            double dz = std::abs(g.coord(0) + (k)*h - uc.z);
            dx = std::min(dx, span - dx);
            dy = std::min(dy, span - dy);
            dz = std::min(dz, span - dz);
            if (dx * dx + dy * dy + dz * dz > rl * rl) continue;
            const std::int64_t q = g.index(wrap(i), wrap(j), wrap(k));
            e += norm2(sl.values.node_value(q));
            d += frobenius2(jac, q);
          }
      // values carry 1/scale, dx carries scale^3; gradients carry 1/scale^2
      sup_energy = std::max(sup_energy, 0.5 * e * h * h * h * scale);
      ball_diss[std::size_t(si)][ci] = d * h * h * h / scale;
    }
  }

  double sup_diss = 0.0;
  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    double acc = 0.0;
    for (int si = 0; si + 1 < used; ++si)
      acc += 0.5 * (v.slice(si + 1).t - v.slice(si).t) *
             (ball_diss[std::size_t(si)][ci] + ball_diss[std::size_t(si) + 1][ci]);
    sup_diss = std::max(sup_diss, acc);
  }

  rep.measured = sup_energy + sup_diss;
  rep.ratio = (rep.a_r > 0.0) ? rep.measured / rep.a_r : 0.0;
  return rep;
}

}  // namespace lprf
