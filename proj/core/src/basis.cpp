#include "lprf/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lprf {

namespace {

// Canonical representative of {n, -n}: first nonzero component positive.
bool is_canonical(int nx, int ny, int nz) {
  if (nx != 0) return nx > 0;
  if (ny != 0) return ny > 0;
  return nz > 0;
}

// Deterministic orthonormal pair perpendicular to kappa.
void polarizations(const Vec3& kappa, Vec3& e1, Vec3& e2) {
  const double mag = norm(kappa);
  const Vec3 unit = kappa / mag;
  const Vec3 helper = std::abs(unit.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  e1 = cross(kappa, helper);
  e1 = e1 / norm(e1);
  e2 = cross(unit, e1);
}

}  // namespace

Vec3 Basis::kappa(int i) const {
  const BasisMode& m = modes_[std::size_t(i)];
  const double base = M_PI / grid_.half_width;
  return Vec3{base * m.n[0], base * m.n[1], base * m.n[2]};
}

double Basis::kappa2(int i) const {
  const Vec3 kv = kappa(i);
  return dot(kv, kv);
}

double Basis::normalization() const {
  const double side = 2.0 * grid_.half_width;
  return std::sqrt(2.0 / (side * side * side));
}

VectorField Basis::field(int i) const {
  const BasisMode& m = modes_[std::size_t(i)];
  const Vec3 kv = kappa(i);
  const double c = normalization();
  VectorField out(grid_);
  for (int kk = 0; kk < grid_.n; ++kk)
    for (int jj = 0; jj < grid_.n; ++jj)
      for (int ii = 0; ii < grid_.n; ++ii) {
        const double phase = dot(kv, grid_.node(ii, jj, kk));
        const double amp = c * (m.is_sin ? std::sin(phase) : std::cos(phase));
        out.set_node_value(ii, jj, kk, m.e * amp);
      }
  return out;
}

VectorField Basis::synthesize(const std::vector<double>& b) const {
  if (int(b.size()) != size()) throw std::invalid_argument("coefficient count mismatch");
  VectorField out(grid_);
  for (int i = 0; i < size(); ++i) {
    if (b[std::size_t(i)] == 0.0) continue;
    out.axpy(b[std::size_t(i)], field(i));
  }
  return out;
}

Basis make_basis(const BoxGrid& grid, int k) {
  if (k < 1) throw std::invalid_argument("basis needs at least one mode");

  // Wavevectors in order of |n|^2, lexicographic tie-break; each canonical n
  // carries four modes (two polarizations times cos/sin).
  struct Entry {
    int n2;
    std::array<int, 3> n;
  };
  std::vector<Entry> shells;
  const int need = (k + 3) / 4 + 1;
  for (int radius = 1; int(shells.size()) < need; ++radius) {
    shells.clear();
    for (int nx = -radius; nx <= radius; ++nx)
      for (int ny = -radius; ny <= radius; ++ny)
        for (int nz = -radius; nz <= radius; ++nz) {
          const int n2 = nx * nx + ny * ny + nz * nz;
          if (n2 == 0 || n2 > radius * radius) continue;
          if (!is_canonical(nx, ny, nz)) continue;
          shells.push_back({n2, {nx, ny, nz}});
        }
  }
  std::sort(shells.begin(), shells.end(), [](const Entry& a, const Entry& b) {
    if (a.n2 != b.n2) return a.n2 < b.n2;
    return a.n < b.n;
  });

  const double base = M_PI / grid.half_width;
  std::vector<BasisMode> modes;
  for (const Entry& en : shells) {
    if (int(modes.size()) >= k) break;
    const int limit = grid.n / 2 - 1;
    if (std::abs(en.n[0]) > limit || std::abs(en.n[1]) > limit || std::abs(en.n[2]) > limit)
      throw std::invalid_argument("basis mode not resolvable on the grid");
    const Vec3 kv{base * en.n[0], base * en.n[1], base * en.n[2]};
    Vec3 e1, e2;
    polarizations(kv, e1, e2);
    for (const Vec3& e : {e1, e2})
      for (const bool is_sin : {false, true}) {
        if (int(modes.size()) >= k) break;
        modes.push_back(BasisMode{en.n, e, is_sin});
      }
  }
  return Basis(grid, std::move(modes));
}

}  // namespace lprf
