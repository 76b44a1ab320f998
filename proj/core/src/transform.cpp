#include "lprf/transform.hpp"

#include <cmath>
#include <stdexcept>

#include "lprf/stencil.hpp"

namespace lprf {

namespace {

bool frame_matches(const SliceFrame& f, double scale, double theta) {
  const double rs = std::abs(f.scale - scale) / scale;
  const double rt = std::abs(f.theta - theta);
  return rs < 1e-12 && rt < 1e-12 * (1.0 + std::abs(theta));
}

VectorField coordinate_field(const BoxGrid& g) {
  VectorField y(g);
  y.fill([](const Vec3& p) { return p; });
  return y;
}

VectorField rotated_coordinate_field(const BoxGrid& g) {
  // J y = (-y2, y1, 0).
  VectorField jy(g);
  jy.fill([](const Vec3& p) { return Vec3{-p.y, p.x, 0.0}; });
  return jy;
}

// d/ds of the velocity at stored node i by 3-node differences, honoring a
// declared period (wrap) and falling back to one-sided stencils at open ends.
VectorField time_derivative(const ProfileTrajectory& traj, int node) {
  const int n = traj.n_nodes();
  VectorField out(traj.grid());
  if (n == 1) return out;  // stationary trajectory

  struct Tap {
    int idx;
    double s;
  };
  std::vector<Tap> taps;
  const double T = traj.period();
  if (T > 0.0) {
    const int im = (node - 1 + n) % n;
    const int ip = (node + 1) % n;
    double sm = traj.s_node(im);
    double sp = traj.s_node(ip);
    if (im > node) sm -= T;
    if (ip < node) sp += T;
    taps = {{im, sm}, {node, traj.s_node(node)}, {ip, sp}};
  } else if (node == 0) {
    const int k = std::min(3, n);
    for (int i = 0; i < k; ++i) taps.push_back({i, traj.s_node(i)});
  } else if (node == n - 1) {
    const int k = std::min(3, n);
    for (int i = n - k; i < n; ++i) taps.push_back({i, traj.s_node(i)});
  } else {
    taps = {{node - 1, traj.s_node(node - 1)},
            {node, traj.s_node(node)},
            {node + 1, traj.s_node(node + 1)}};
  }
  std::vector<double> xs;
  for (const Tap& t : taps) xs.push_back(t.s);
  const std::vector<double> w = diff_weights(traj.s_node(node), xs, 1);
  for (std::size_t k = 0; k < taps.size(); ++k) out.axpy(w[k], traj.velocity(taps[k].idx));
  return out;
}

}  // namespace

ProfileTrajectory to_profile(const PhysicalField& v, double alpha) {
  if (v.empty()) throw std::logic_error("empty physical field");
  const BoxGrid grid = v.slice(0).values.grid();
  const bool with_p = v.has_pressure();
  ProfileTrajectory traj(grid, alpha);
  for (int i = 0; i < v.n_slices(); ++i) {
    const Slice& sl = v.slice(i);
    const double s = std::log(sl.t);
    const double scale = std::sqrt(sl.t);
    const double theta = alpha * s;
    VectorField u(grid);
    ScalarField p(with_p ? grid : BoxGrid());
    if (sl.values.grid() == grid && frame_matches(sl.frame, scale, theta)) {
      u = sl.values;
      if (with_p) p = sl.pressure;
    } else {
      const Mat3 rot = rotation_matrix(theta);
      const Mat3 rot_back = rotation_matrix(-theta);
      for (int kz = 0; kz < grid.n; ++kz)
        for (int jy = 0; jy < grid.n; ++jy)
          for (int ix = 0; ix < grid.n; ++ix) {
            const Vec3 x = (rot * grid.node(ix, jy, kz)) * scale;
            u.set_node_value(ix, jy, kz, (rot_back * v.sample_slice(i, x)) * scale);
            if (with_p)
              p.at(ix, jy, kz) = v.sample_pressure_slice(i, x) * sl.t;
          }
    }
    if (with_p)
      traj.add_node(s, std::move(u), std::move(p));
    else
      traj.add_node(s, std::move(u));
  }
  return traj;
}

PhysicalField from_profile(const ProfileTrajectory& traj) {
  if (traj.empty()) throw std::logic_error("empty profile trajectory");
  PhysicalField v;
  for (int i = 0; i < traj.n_nodes(); ++i) {
    const double s = traj.s_node(i);
    const double t = std::exp(s);
    const SliceFrame frame{std::sqrt(t), traj.alpha() * s};
    if (traj.has_pressure())
      v.add_slice(t, frame, traj.velocity(i), traj.pressure(i));
    else
      v.add_slice(t, frame, traj.velocity(i));
  }
  return v;
}

VectorField profile_residual_field(const ProfileTrajectory& traj, int node, bool linear_only) {
  const BoxGrid& g = traj.grid();
  const double alpha = traj.alpha();
  const VectorField& u = traj.velocity(node);

  VectorField res = time_derivative(traj, node);
  res.axpy(-0.5, u);
  res.axpy(-1.0, fd_laplacian(u));

  const VectorField y = coordinate_field(g);
  res.axpy(-0.5, fd_advect(y, u));

  if (alpha != 0.0) {
    VectorField ju(g);
    for (std::int64_t idx = 0; idx < g.size(); ++idx) {
      const Vec3 w = u.node_value(idx);
      ju.set_node_value(idx, Vec3{-w.y, w.x, 0.0});
    }
    res.axpy(alpha, ju);
    res.axpy(-alpha, fd_advect(rotated_coordinate_field(g), u));
  }

  if (!linear_only) {
    res.axpy(1.0, fd_advect(u, u));
    if (traj.has_pressure()) res.axpy(1.0, fd_gradient(traj.pressure(node)));
  }
  return res;
}

ResidualReport profile_equation_residual(const ProfileTrajectory& traj, bool linear_only,
                                         double interior_frac) {
  if (traj.empty()) throw std::logic_error("empty profile trajectory");
  const RegionPredicate interior = interior_cube(interior_frac, traj.grid().half_width);
  ResidualReport rep;
  for (int i = 0; i < traj.n_nodes(); ++i) {
    const VectorField res = profile_residual_field(traj, i, linear_only);
    const ScalarField div = fd_divergence(traj.velocity(i));
    rep.node_coordinate.push_back(traj.s_node(i));
    rep.momentum_l2.push_back(lp_norm(res, 2.0, interior));
    rep.divergence_l2.push_back(lp_norm(div, 2.0, interior));
    rep.max_momentum_l2 = std::max(rep.max_momentum_l2, rep.momentum_l2.back());
    rep.max_divergence_l2 = std::max(rep.max_divergence_l2, rep.divergence_l2.back());
  }
  return rep;
}

ResidualReport nse_residual(const PhysicalField& v, double interior_frac) {
  if (v.n_slices() < 4)
    throw std::invalid_argument("physical residual needs at least 4 time slices");
  ResidualReport rep;
  for (int i = 1; i + 1 < v.n_slices(); ++i) {
    const Slice& sl = v.slice(i);
    const BoxGrid& g = sl.values.grid();
    const double scale = sl.frame.scale;
    const Mat3 rot = rotation_matrix(sl.frame.theta);
    const double inv_s3 = 1.0 / (scale * scale * scale);

    VectorField spatial = fd_laplacian(sl.values);
    spatial *= -1.0;
    spatial.axpy(1.0, fd_advect(sl.values, sl.values));
    if (sl.has_pressure()) spatial.axpy(1.0, fd_gradient(sl.pressure));

    const std::vector<double> w = diff_weights(
        sl.t, {v.slice(i - 1).t, sl.t, v.slice(i + 1).t}, 1);

    const double cap = interior_frac * g.half_width;
    const double w_cell = std::pow(scale * g.spacing(), 3);
    double mom = 0.0, divn = 0.0;
    const ScalarField div = fd_divergence(sl.values);
    for (int kz = 0; kz < g.n; ++kz)
      for (int jy = 0; jy < g.n; ++jy)
        for (int ix = 0; ix < g.n; ++ix) {
          const Vec3 y = g.node(ix, jy, kz);
          if (std::abs(y.x) > cap || std::abs(y.y) > cap || std::abs(y.z) > cap) continue;
          const Vec3 x = sl.frame.to_physical(y);
          Vec3 dt_v;
          try {
            dt_v = v.sample_slice(i - 1, x) * w[0] +
                   ((rot * sl.values.node_value(ix, jy, kz)) / scale) * w[1] +
                   v.sample_slice(i + 1, x) * w[2];
          } catch (const std::domain_error&) {
            continue;  // time stencil leaves a neighbor hull; skip this node
          }
          const Vec3 r = dt_v + (rot * spatial.node_value(ix, jy, kz)) * inv_s3;
          mom += w_cell * norm2(r);
          const double d = div.at(ix, jy, kz) / (scale * scale);
          divn += w_cell * d * d;
        }
    rep.node_coordinate.push_back(sl.t);
    rep.momentum_l2.push_back(std::sqrt(mom));
    rep.divergence_l2.push_back(std::sqrt(divn));
    rep.max_momentum_l2 = std::max(rep.max_momentum_l2, rep.momentum_l2.back());
    rep.max_divergence_l2 = std::max(rep.max_divergence_l2, rep.divergence_l2.back());
  }
  return rep;
}

}  // namespace lprf
