#include "lprf/symmetry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lprf {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Polar/azimuthal angles of a direction vector (need not be unit length).
void direction_angles(const Vec3& d, double& theta, double& phi_az) {
  const double rho = std::hypot(d[0], d[1]);
  theta = std::atan2(rho, d[2]);
  phi_az = std::atan2(d[1], d[0]);
  if (phi_az < 0.0) phi_az += 2.0 * kPi;
}
}  // namespace

const char* to_string(SymmetryKind k) {
  switch (k) {
    case SymmetryKind::SS: return "SS";
    case SymmetryKind::RSS: return "RSS";
    case SymmetryKind::DSS: return "DSS";
    case SymmetryKind::RDSS: return "RDSS";
  }
  return "?";
}

SymmetryKind symmetry_kind_from_string(const std::string& s) {
  if (s == "SS") return SymmetryKind::SS;
  if (s == "RSS") return SymmetryKind::RSS;
  if (s == "DSS") return SymmetryKind::DSS;
  if (s == "RDSS") return SymmetryKind::RDSS;
  throw std::invalid_argument("unknown symmetry kind: " + s);
}

SymmetrySpec SymmetrySpec::ss(double probe_lambda) {
  SymmetrySpec s;
  s.kind = SymmetryKind::SS;
  s.lambda = probe_lambda;
  s.validate();
  return s;
}

SymmetrySpec SymmetrySpec::rss(double alpha, double probe_lambda) {
  SymmetrySpec s;
  s.kind = SymmetryKind::RSS;
  s.lambda = probe_lambda;
  s.alpha = alpha;
  s.validate();
  return s;
}

SymmetrySpec SymmetrySpec::dss(double lambda) {
  SymmetrySpec s;
  s.kind = SymmetryKind::DSS;
  s.lambda = lambda;
  s.validate();
  return s;
}

SymmetrySpec SymmetrySpec::rdss(double lambda, double phi) {
  SymmetrySpec s;
  s.kind = SymmetryKind::RDSS;
  s.lambda = lambda;
  s.validate();  // need lambda checked before dividing by period
  s.alpha = phi / s.period();
  return s;
}

double SymmetrySpec::period() const { return 2.0 * std::log(lambda); }

double SymmetrySpec::phi() const { return alpha * period(); }

void SymmetrySpec::validate() const {
  if (!(lambda > 1.0)) throw std::invalid_argument("symmetry scale factor must exceed 1");
  if (!std::isfinite(lambda) || !std::isfinite(alpha))
    throw std::invalid_argument("symmetry parameters must be finite");
}

FundamentalData FundamentalData::from_function(const SymmetrySpec& spec, int ntheta, int nphi,
                                               int nr,
                                               const std::function<Vec3(const Vec3&)>& v) {
  spec.validate();
  if (ntheta < 2 || nphi < 2) throw std::invalid_argument("need at least 2x2 angular samples");
  FundamentalData d;
  d.spec_ = spec;
  d.ntheta_ = ntheta;
  d.nphi_ = nphi;
  d.nr_ = spec.continuous() ? 1 : nr;
  if (d.nr_ < 1) throw std::invalid_argument("need at least one radial shell");
  d.samples_.resize(std::size_t(d.nr_) * ntheta * nphi);
  for (int ir = 0; ir < d.nr_; ++ir) {
    const double r = spec.continuous() ? 1.0 : std::pow(spec.lambda, double(ir) / d.nr_);
    for (int it = 0; it < ntheta; ++it) {
      const double theta = (it + 0.5) * kPi / ntheta;
      for (int ip = 0; ip < nphi; ++ip) {
        const double phi = 2.0 * kPi * ip / nphi;
        const Vec3 x = {r * std::sin(theta) * std::cos(phi),
                        r * std::sin(theta) * std::sin(phi), r * std::cos(theta)};
        d.samples_[d.index(ir, it, ip)] = v(x);
      }
    }
  }
  return d;
}

double FundamentalData::max_sample_magnitude() const {
  double m = 0.0;
  for (const Vec3& s : samples_) m = std::max(m, norm(s));
  return m;
}

// Bilinear interpolation on one shell; theta is clamped at the cell-center
// rows nearest the poles, phi wraps.
Vec3 FundamentalData::interp_angular(int ir, double theta, double phi_az) const {
  const double dt = kPi / ntheta_;
  double tt = theta / dt - 0.5;
  int i0;
  double ft;
  if (tt <= 0.0) {
    i0 = 0;
    ft = 0.0;
  } else if (tt >= ntheta_ - 1) {
    i0 = ntheta_ - 2;
    ft = 1.0;
  } else {
    i0 = int(tt);
    ft = tt - i0;
  }
  const double dp = 2.0 * kPi / nphi_;
  double tp = phi_az / dp;
  int j0 = int(std::floor(tp));
  const double fp = tp - j0;
  j0 = ((j0 % nphi_) + nphi_) % nphi_;
  const int j1 = (j0 + 1) % nphi_;

  const Vec3 a = sample(ir, i0, j0) * (1.0 - fp) + sample(ir, i0, j1) * fp;
  const Vec3 b = sample(ir, i0 + 1, j0) * (1.0 - fp) + sample(ir, i0 + 1, j1) * fp;
  return a * (1.0 - ft) + b * ft;
}

Vec3 FundamentalData::evaluate(const Vec3& x) const {
  const double r = norm(x);
  if (r == 0.0) throw std::domain_error("fundamental-domain extension is singular at the origin");
  if (!std::isfinite(r)) throw std::range_error("scale recursion exceeding floating range");

  if (spec_.continuous()) {
    // v(x) = (1/r) R(a) sigma(R(-a) xhat), a = 2 alpha log r.
    const double a = 2.0 * spec_.alpha * std::log(r);
    const Vec3 d = rotation_matrix(-a) * (x / r);
    double theta, phi_az;
    direction_angles(d, theta, phi_az);
    return (rotation_matrix(a) * interp_angular(0, theta, phi_az)) / r;
  }

  // Map into the fundamental annulus 1 <= |y| < lambda with
  // y = lambda^k R(k phi) x, then v(x) = lambda^k R(-k phi) v(y).
  const double lambda = spec_.lambda;
  const double phi_cell = spec_.phi();
  // Cap on symmetry applications; beyond it lambda^k and the value scale are
  // numerically meaningless even when representable.
  constexpr double kMaxApplications = 200.0;
  const double lr = std::log(r) / std::log(lambda);
  const double kf = -std::floor(lr);
  if (std::abs(kf) > kMaxApplications)
    throw std::range_error("scale recursion exceeding floating range");
  const int k = int(kf);
  const double scale = std::pow(lambda, double(k));
  const Vec3 y = (rotation_matrix(k * phi_cell) * x) * scale;

  double theta, phi_az;
  direction_angles(y, theta, phi_az);
  double u = nr_ * (std::log(norm(y)) / std::log(lambda));
  u = std::min(std::max(u, 0.0), double(nr_) - 1e-12);
  const int j = std::min(int(u), nr_ - 1);
  const double fr = u - j;

  const Vec3 lower = interp_angular(j, theta, phi_az);
  Vec3 upper;
  if (j + 1 < nr_) {
    upper = interp_angular(j + 1, theta, phi_az);
  } else {
    // Wrap shell at |y| = lambda carries the cell twist:
    // v(lambda yhat) = (1/lambda) R(phi) v(R(-phi) yhat).
    const Vec3 d = rotation_matrix(-phi_cell) * (y / norm(y));
    double th2, ph2;
    direction_angles(d, th2, ph2);
    upper = (rotation_matrix(phi_cell) * interp_angular(0, th2, ph2)) / lambda;
  }
  const Vec3 vy = lower * (1.0 - fr) + upper * fr;
  return (rotation_matrix(-k * phi_cell) * vy) * scale;
}

VectorField extend_from_fundamental_domain(const FundamentalData& data, const BoxGrid& grid) {
  VectorField out(grid);
  for (int kz = 0; kz < grid.n; ++kz)
    for (int jy = 0; jy < grid.n; ++jy)
      for (int ix = 0; ix < grid.n; ++ix) {
        const Vec3 x = grid.node(ix, jy, kz);
        const Vec3 val = (norm(x) == 0.0) ? Vec3{0.0, 0.0, 0.0} : data.evaluate(x);
        out.set_node_value(ix, jy, kz, val);
      }
  return out;
}

VectorField apply_similarity_symmetry(const VectorField& v, double lambda, double phi,
                                      const BoxGrid& target) {
  VectorField out(target);
  const Mat3 rot = rotation_matrix(phi);
  const Mat3 rot_back = rotation_matrix(-phi);
  for (int kz = 0; kz < target.n; ++kz)
    for (int jy = 0; jy < target.n; ++jy)
      for (int ix = 0; ix < target.n; ++ix) {
        const Vec3 x = target.node(ix, jy, kz);
        const Vec3 val = (rot_back * v.sample((rot * x) * lambda)) * lambda;
        out.set_node_value(ix, jy, kz, val);
      }
  return out;
}

double symmetry_defect(const VectorField& v, const SymmetrySpec& spec, double r_min,
                       double r_max) {
  spec.validate();
  const BoxGrid& g = v.grid();
  if (r_max <= 0.0) r_max = 0.95 * g.half_width / spec.lambda;
  if (!(r_max > r_min))
    throw std::invalid_argument("symmetry defect shell is empty; grid too small for this scale");
  const double lambda = spec.lambda;
  const Mat3 rot = rotation_matrix(spec.phi());
  const Mat3 rot_back = rotation_matrix(-spec.phi());

  double num = 0.0, den = 0.0;
  for (int kz = 0; kz < g.n; ++kz)
    for (int jy = 0; jy < g.n; ++jy)
      for (int ix = 0; ix < g.n; ++ix) {
        const Vec3 x = g.node(ix, jy, kz);
        const double r = norm(x);
        if (r < r_min || r > r_max) continue;
        const Vec3 here = v.node_value(ix, jy, kz);
        const Vec3 image = (rot_back * v.sample((rot * x) * lambda)) * lambda;
        num += norm2(here - image);
        den += norm2(here);
      }
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

}  // namespace lprf
