#include <array>
#include <stdexcept>

#include "lprf/galerkin.hpp"
#include "lprf/spectral.hpp"

namespace lprf {

ProfileTrajectory recover_pressure(const ProfileTrajectory& A, const ProfileTrajectory* Bfield) {
  if (A.empty()) throw std::invalid_argument("empty profile trajectory");
  const bool have_b = Bfield && !Bfield->empty();
  if (have_b && Bfield->grid() != A.grid())
    throw std::invalid_argument("perturbation grid does not match the profile grid");

  ProfileTrajectory out(A.grid(), A.alpha(), A.period());
  const BoxGrid& g = A.grid();
  for (int node = 0; node < A.n_nodes(); ++node) {
    const VectorField& a = A.velocity(node);
    VectorField b(g);
    if (have_b) b = Bfield->velocity_at(A.s_node(node));

    // Upper triangle of A_i A_j + A_i B_j + B_i A_j.
    std::array<ScalarField, 6> q{ScalarField(g), ScalarField(g), ScalarField(g),
                                 ScalarField(g), ScalarField(g), ScalarField(g)};
    for (std::int64_t idx = 0; idx < a.size(); ++idx) {
      const Vec3 av = a.node_value(idx);
      const Vec3 bv = have_b ? b.node_value(idx) : Vec3{};
      q[0][idx] = av.x * av.x + 2.0 * av.x * bv.x;
      q[1][idx] = av.x * av.y + av.x * bv.y + bv.x * av.y;
      q[2][idx] = av.x * av.z + av.x * bv.z + bv.x * av.z;
      q[3][idx] = av.y * av.y + 2.0 * av.y * bv.y;
      q[4][idx] = av.y * av.z + av.y * bv.z + bv.y * av.z;
      q[5][idx] = av.z * av.z + 2.0 * av.z * bv.z;
    }
    out.add_node(A.s_node(node), a, riesz_pressure(q));
  }
  return out;
}

}  // namespace lprf
