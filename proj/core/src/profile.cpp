#include "lprf/profile.hpp"

#include <cmath>
#include <stdexcept>

namespace lprf {

void ProfileTrajectory::add_node(double s, VectorField u) {
  if (!p_.empty()) throw std::logic_error("trajectory already carries pressure nodes");
  if (!s_.empty() && !(s > s_.back()))
    throw std::invalid_argument("profile nodes must have strictly increasing s");
  if (u.grid() != grid_) throw std::invalid_argument("profile node grid mismatch");
  s_.push_back(s);
  u_.push_back(std::move(u));
}

void ProfileTrajectory::add_node(double s, VectorField u, ScalarField p) {
  if (p_.size() != u_.size())
    throw std::logic_error("trajectory has velocity-only nodes; cannot add pressure node");
  if (!s_.empty() && !(s > s_.back()))
    throw std::invalid_argument("profile nodes must have strictly increasing s");
  if (u.grid() != grid_ || p.grid() != grid_)
    throw std::invalid_argument("profile node grid mismatch");
  s_.push_back(s);
  u_.push_back(std::move(u));
  p_.push_back(std::move(p));
}

// Bracketing nodes and interpolation weight for s, honoring periodicity.
// w is the weight of node i1; i1 may wrap to 0 across the seam.
void ProfileTrajectory::locate(double s, int& i0, int& i1, double& w) const {
  if (s_.empty()) throw std::logic_error("empty profile trajectory");
  const int n = int(s_.size());
  if (period_ > 0.0) {
    const double s0 = s_.front();
    s = s - period_ * std::floor((s - s0) / period_);
    if (s >= s_.back()) {
      // Seam between the last node and the first node one period up.
      i0 = n - 1;
      i1 = 0;
      const double gap = (s0 + period_) - s_.back();
      w = (gap > 0.0) ? (s - s_.back()) / gap : 0.0;
      return;
    }
  } else {
    const double rel = 1e-12 * (std::abs(s_.back()) + 1.0);
    if (s < s_.front() - rel || s > s_.back() + rel)
      throw std::domain_error("s outside stored trajectory range");
    s = std::min(std::max(s, s_.front()), s_.back());
  }
  int lo = 0, hi = n - 1;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (s_[mid] <= s)
      lo = mid;
    else
      hi = mid - 1;
  }
  i0 = lo;
  i1 = std::min(lo + 1, n - 1);
  w = (i1 == i0) ? 0.0 : (s - s_[i0]) / (s_[i1] - s_[i0]);
}

VectorField ProfileTrajectory::velocity_at(double s) const {
  int i0, i1;
  double w;
  locate(s, i0, i1, w);
  if (w == 0.0) return u_[i0];
  VectorField out = u_[i0];
  out *= (1.0 - w);
  out.axpy(w, u_[i1]);
  return out;
}

ScalarField ProfileTrajectory::pressure_at(double s) const {
  if (!has_pressure()) throw std::logic_error("trajectory carries no pressure");
  int i0, i1;
  double w;
  locate(s, i0, i1, w);
  if (w == 0.0) return p_[i0];
  ScalarField out = p_[i0];
  out *= (1.0 - w);
  ScalarField b = p_[i1];
  b *= w;
  out += b;
  return out;
}

double periodicity_defect(const ProfileTrajectory& traj, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("period must be positive");
  if (traj.empty()) throw std::logic_error("empty profile trajectory");
  const double s_lo = traj.s_node(0);
  const double s_hi = traj.s_node(traj.n_nodes() - 1);
  const double rel = 1e-12 * (std::abs(s_hi) + T);
  if (s_hi < s_lo + T - rel)
    throw std::invalid_argument("trajectory range shorter than one period");

  double num = 0.0, den = 0.0;
  for (int i = 0; i < traj.n_nodes(); ++i) {
    const double s = traj.s_node(i);
    if (s + T > s_hi + rel) break;
    const VectorField& here = traj.velocity(i);
    VectorField shifted = traj.velocity_at(std::min(s + T, s_hi));
    const std::int64_t m = here.size();
    for (int c = 0; c < 3; ++c) {
      const double* a = here.data(c);
      const double* b = shifted.data(c);
      for (std::int64_t idx = 0; idx < m; ++idx) {
        const double d = a[idx] - b[idx];
        num += d * d;
        den += a[idx] * a[idx];
      }
    }
  }
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

double steadiness_defect(const ProfileTrajectory& traj) {
  if (traj.empty()) throw std::logic_error("empty profile trajectory");
  const VectorField& base = traj.velocity(0);
  const double base_norm = lp_norm(base, 2.0);
  double worst = 0.0;
  for (int i = 1; i < traj.n_nodes(); ++i) {
    VectorField diff = traj.velocity(i);
    diff -= base;
    const double d = lp_norm(diff, 2.0);
    worst = std::max(worst, base_norm > 0.0 ? d / base_norm : d);
  }
  return worst;
}

}  // namespace lprf
