#include <cmath>
#include <stdexcept>

#include "lprf/compose.hpp"
#include "lprf/galerkin.hpp"
#include "lprf/stencil.hpp"

namespace lprf {

ComposedSolution compose_solution(const ProfileTrajectory& U, const ProfileTrajectory& W,
                                  const ProfileTrajectory& Bprofile, const PhysicalField& bphys,
                                  double interior_frac) {
  if (U.empty()) throw std::invalid_argument("empty profile trajectory");
  const BoxGrid& g = U.grid();
  const bool have_w = !W.empty();
  const bool have_bp = !Bprofile.empty();
  const bool have_bv = bphys.n_slices() > 0;
  if (have_w && W.grid() != g) throw std::invalid_argument("background grid mismatch");
  if (have_bp && Bprofile.grid() != g) throw std::invalid_argument("perturbation grid mismatch");

  ComposedSolution out;

  // A = U + W on U's s-nodes.
  ProfileTrajectory A(g, U.alpha(), U.period());
  for (int i = 0; i < U.n_nodes(); ++i) {
    VectorField sum = U.velocity(i);
    if (have_w) sum += W.velocity_at(U.s_node(i));
    A.add_node(U.s_node(i), std::move(sum));
  }
  out.A = recover_pressure(A, have_bp ? &Bprofile : nullptr);
  out.a = from_profile(out.A);
  out.b = bphys;

  // v = a + b on a's slices: the added part enters in the slice frame.
  if (have_bv) {
    PhysicalField v;
    for (int i = 0; i < out.a.n_slices(); ++i) {
      const Slice& sl = out.a.slice(i);
      const double t = sl.t;
      if (t < bphys.t_min() - 1e-12 || t > bphys.t_max() + 1e-12)
        throw std::invalid_argument("perturbation does not cover the composed times");
      const Mat3 rot = rotation_matrix(sl.frame.theta);
      const Mat3 unrot = rotation_matrix(-sl.frame.theta);
      VectorField vals = sl.values;
      ScalarField prs = sl.has_pressure() ? sl.pressure : ScalarField(g);
      for (int kk = 0; kk < g.n; ++kk)
        for (int jj = 0; jj < g.n; ++jj)
          for (int ii = 0; ii < g.n; ++ii) {
            const Vec3 x = rot * g.node(ii, jj, kk) * sl.frame.scale;
            const std::int64_t idx = g.index(ii, jj, kk);
            const Vec3 vb = bphys.sample(x, t);
            vals.set_node_value(idx, vals.node_value(idx) + unrot * vb * sl.frame.scale);
            if (bphys.has_pressure())
              prs[idx] += sl.frame.scale * sl.frame.scale * bphys.sample_pressure(x, t);
          }
      if (sl.has_pressure() || bphys.has_pressure())
        v.add_slice(t, sl.frame, std::move(vals), std::move(prs));
      else
        v.add_slice(t, sl.frame, std::move(vals));
    }
    out.v = std::move(v);
  } else {
    out.v = out.a;
  }

  // Residual of the A-equation including the b-coupling, in similarity
  // variables on the interior (the drift grows linearly, the outer shell is
  // mask territory).
  const RegionPredicate where = interior_cube(interior_frac, g.half_width);
  for (int i = 0; i < out.A.n_nodes(); ++i) {
    VectorField res = profile_residual_field(out.A, i, false);
    if (have_bp) {
      const VectorField bf = Bprofile.velocity_at(out.A.s_node(i));
      res += fd_advect(out.A.velocity(i), bf);
      res += fd_advect(bf, out.A.velocity(i));
    }
    const double mom = lp_norm(res, 2.0, where);
    const double div = lp_norm(fd_divergence(out.A.velocity(i)), 2.0, where);
    out.residual.node_coordinate.push_back(out.A.s_node(i));
    out.residual.momentum_l2.push_back(mom);
    out.residual.divergence_l2.push_back(div);
    out.residual.max_momentum_l2 = std::max(out.residual.max_momentum_l2, mom);
    out.residual.max_divergence_l2 = std::max(out.residual.max_divergence_l2, div);
  }
  return out;
}

}  // namespace lprf
