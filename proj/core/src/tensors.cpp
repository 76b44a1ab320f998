#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "lprf/galerkin.hpp"
#include "lprf/littlewood_paley.hpp"
#include "lprf/spectral.hpp"
#include "lprf/stencil.hpp"

namespace lprf {

double DriftMask::value(double r, double L) const {
  const double r0 = inner < 0.0 ? 0.8 * L : inner;
  const double r1 = outer < 0.0 ? 0.95 * L : outer;
  if (r <= r0) return 1.0;
  if (r >= r1 || !(r1 > r0)) return 0.0;
  // quintic smoothstep, falling from 1 at r0 to 0 at r1
  const double x = (r - r0) / (r1 - r0);
  return 1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

void GalerkinTensors::A_at(double s, std::vector<double>& out) const {
  const int m = int(s_nodes.size());
  if (m == 1) {
    out = A[0];
    return;
  }
  double w = 0.0;
  int i0 = 0, i1 = 0;
  if (period > 0.0) s = s - period * std::floor(s / period);
  for (i0 = m - 1; i0 > 0 && s_nodes[std::size_t(i0)] > s; --i0) {
  }
  i1 = i0 + 1;
  double gap;
  if (i1 == m) {
    i1 = 0;  // wrap across the seam
    gap = (period > 0.0 ? period : s_nodes.back() - s_nodes.front()) - s_nodes.back() +
          s_nodes.front();
    if (!(gap > 0.0)) gap = 1.0;
  } else {
    gap = s_nodes[std::size_t(i1)] - s_nodes[std::size_t(i0)];
  }
  w = (s - s_nodes[std::size_t(i0)]) / gap;
  w = std::min(std::max(w, 0.0), 1.0);
  out = A[std::size_t(i0)];
  const std::vector<double>& hi = A[std::size_t(i1)];
  for (std::size_t q = 0; q < out.size(); ++q) out[q] = (1.0 - w) * out[q] + w * hi[q];
}

void GalerkinTensors::C_at(double s, std::vector<double>& out) const {
  const int m = int(s_nodes.size());
  if (m == 1) {
    out = C[0];
    return;
  }
  if (period > 0.0) s = s - period * std::floor(s / period);
  int i0 = m - 1;
  for (; i0 > 0 && s_nodes[std::size_t(i0)] > s; --i0) {
  }
  int i1 = i0 + 1;
  double gap;
  if (i1 == m) {
    i1 = 0;
    gap = (period > 0.0 ? period : s_nodes.back() - s_nodes.front()) - s_nodes.back() +
          s_nodes.front();
    if (!(gap > 0.0)) gap = 1.0;
  } else {
    gap = s_nodes[std::size_t(i1)] - s_nodes[std::size_t(i0)];
  }
  double w = (s - s_nodes[std::size_t(i0)]) / gap;
  w = std::min(std::max(w, 0.0), 1.0);
  out = C[std::size_t(i0)];
  const std::vector<double>& hi = C[std::size_t(i1)];
  for (std::size_t q = 0; q < out.size(); ++q) out[q] = (1.0 - w) * out[q] + w * hi[q];
}

namespace {

// Integral over the box of T1(ka . y) T2(kb . y) T3(kc . y), each factor cos
// or sin: expand in exponentials, keep the sign choices whose integer
// wavevectors cancel. Exact, so the discrete quadrature is too (the total
// degree stays below the grid Nyquist for any basis this module builds).
double triple_trig_integral(const std::array<int, 3>& na, bool sa, const std::array<int, 3>& nb,
                            bool sb, const std::array<int, 3>& nc, bool sc, double volume) {
  const std::complex<double> half(0.5, 0.0);
  const std::complex<double> halfi(0.0, -0.5);  // sin t = (e^{it} - e^{-it}) * (-i/2)
  std::complex<double> total = 0.0;
  for (int s1 = -1; s1 <= 1; s1 += 2)
    for (int s2 = -1; s2 <= 1; s2 += 2)
      for (int s3 = -1; s3 <= 1; s3 += 2) {
        bool zero = true;
        for (int d = 0; d < 3; ++d)
          if (s1 * na[d] + s2 * nb[d] + s3 * nc[d] != 0) {
            zero = false;
            break;
          }
        if (!zero) continue;
        const std::complex<double> wa = sa ? halfi * double(s1) : half;
        const std::complex<double> wb = sb ? halfi * double(s2) : half;
        const std::complex<double> wc = sc ? halfi * double(s3) : half;
        total += wa * wb * wc;
      }
  return total.real() * volume;
}

// (g, a_j) for every j from one transform of g: the mode is c trig(kappa . y)
// e, so the inner product is c e . (component-wise trig integrals of g).
void project_onto_basis(const Basis& basis, const VectorField& g, double* out, int k,
                        double scale) {
  const SpectralVector ghat = fft_forward(g);
  const double c = basis.normalization();
  for (int j = 0; j < k; ++j) {
    const BasisMode& m = basis.mode(j);
    double acc = 0.0;
    for (int d = 0; d < 3; ++d) {
      if (m.e[d] == 0.0) continue;
      acc += m.e[d] * trig_inner(ghat.comp[d], m.n, m.is_sin);
    }
    out[j] += scale * c * acc;
  }
}

ScalarField component_copy(const VectorField& v, int c) {
  ScalarField out(v.grid());
  std::copy(v.data(c), v.data(c) + v.size(), out.data());
  return out;
}

// grad G as nine scalar fields, spectral derivatives: dG[c][d] = d_d G_c.
std::array<std::array<ScalarField, 3>, 3> spectral_jacobian(const VectorField& G) {
  std::array<std::array<ScalarField, 3>, 3> dG{{
      {ScalarField(G.grid()), ScalarField(G.grid()), ScalarField(G.grid())},
      {ScalarField(G.grid()), ScalarField(G.grid()), ScalarField(G.grid())},
      {ScalarField(G.grid()), ScalarField(G.grid()), ScalarField(G.grid())},
  }};
  for (int c = 0; c < 3; ++c) {
    const VectorField grad = spectral_gradient(component_copy(G, c));
    for (int d = 0; d < 3; ++d) dG[std::size_t(c)][std::size_t(d)] = component_copy(grad, d);
  }
  return dG;
}

VectorField resample_node(const ProfileTrajectory& traj, double s) {
  return traj.velocity_at(s);
}

}  // namespace

GalerkinTensors assemble_tensors(const Basis& basis, const ProfileTrajectory* W,
                                 const ProfileTrajectory* Bfield, double eps,
                                 const TensorOptions& opt) {
  if (eps < 0.0) throw std::invalid_argument("mollification width must be nonnegative");
  const BoxGrid& g = basis.grid();
  if (W && !W->empty() && W->grid() != g)
    throw std::invalid_argument("background grid does not match the basis grid");
  if (Bfield && !Bfield->empty() && Bfield->grid() != g)
    throw std::invalid_argument("perturbation grid does not match the basis grid");
  const int k = basis.size();
  const double L = g.half_width;
  const double side = 2.0 * L;
  const double volume = side * side * side;
  const double c = basis.normalization();

  GalerkinTensors tns;
  tns.k = k;
  tns.eps = eps;

  // Time nodes: steady unless W or B declares a period.
  double period = 0.0;
  if (W && !W->empty() && W->period() > 0.0) period = W->period();
  if (Bfield && !Bfield->empty() && Bfield->period() > 0.0) period = Bfield->period();
  tns.period = period;
  if (period > 0.0) {
    const int m = std::max(2, opt.n_s);
    for (int i = 0; i < m; ++i) tns.s_nodes.push_back(period * i / m);
  } else {
    tns.s_nodes.push_back(0.0);
  }

  tns.stiff.resize(std::size_t(k));
  for (int j = 0; j < k; ++j) tns.stiff[std::size_t(j)] = -basis.kappa2(j);

  // Cubic tensor, closed form. eta_eps * a_i is a_i scaled by the
  // transform of the mollifier at kappa_i, and the l-derivative flips the
  // trig kind: (cos)' = -sin, (sin)' = cos.
  tns.B.assign(std::size_t(k) * k * k, 0.0);
  for (int i = 0; i < k; ++i) {
    const BasisMode& mi = basis.mode(i);
    const double molly = mollifier_transform(eps, basis.kappa(i));
    for (int l = 0; l < k; ++l) {
      const BasisMode& ml = basis.mode(l);
      const Vec3 kl = basis.kappa(l);
      const double advect = dot(mi.e, kl);
      if (advect == 0.0) continue;
      const double dsign = ml.is_sin ? 1.0 : -1.0;
      const bool dkind = !ml.is_sin;
      for (int j = 0; j < k; ++j) {
        const BasisMode& mj = basis.mode(j);
        const double pol = dot(ml.e, mj.e);
        if (pol == 0.0) continue;
        const double tri =
            triple_trig_integral(mi.n, mi.is_sin, ml.n, dkind, mj.n, mj.is_sin, volume);
        if (tri == 0.0) continue;
        tns.B[(std::size_t(i) * k + std::size_t(l)) * k + std::size_t(j)] -=
            molly * c * c * c * advect * dsign * pol * tri;
      }
    }
  }

  // Time-independent part of A: exact stiff diagonal and mass term, masked
  // drift (and rotation coupling) by quadrature through one transform per
  // row.
  std::vector<double> A0(std::size_t(k) * k, 0.0);
  for (int j = 0; j < k; ++j)
    A0[std::size_t(j) * k + std::size_t(j)] = tns.stiff[std::size_t(j)] + 0.5;
  for (int i = 0; i < k; ++i) {
    const BasisMode& mi = basis.mode(i);
    const Vec3 ki = basis.kappa(i);
    VectorField gi(g);
    for (int kk = 0; kk < g.n; ++kk)
      for (int jj = 0; jj < g.n; ++jj)
        for (int ii = 0; ii < g.n; ++ii) {
          const Vec3 y = g.node(ii, jj, kk);
          const double phase = dot(ki, y);
          const double trig = mi.is_sin ? std::sin(phase) : std::cos(phase);
          const double dtrig = mi.is_sin ? std::cos(phase) : -std::sin(phase);
          const double mask = opt.mask.value(norm(y), L);
          // (y/2) . grad a_i = (y . kappa / 2) trig' e, masked
          Vec3 val = mi.e * (0.5 * mask * dot(y, ki) * c * dtrig);
          if (opt.alpha != 0.0) {
            // -alpha (J a_i - (J y) . grad a_i), J the rotation generator
            const Vec3 ja{-mi.e.y * c * trig, mi.e.x * c * trig, 0.0};
            const Vec3 jy{-y.y, y.x, 0.0};
            val -= ja * opt.alpha;
            val += mi.e * (opt.alpha * mask * dot(jy, ki) * c * dtrig);
          }
          gi.set_node_value(ii, jj, kk, val);
        }
    project_onto_basis(basis, gi, &A0[std::size_t(i) * k], k, 1.0);
  }

  // Per-node advection couplings and forcing.
  const int m = int(tns.s_nodes.size());
  tns.A.assign(std::size_t(m), A0);
  tns.C.assign(std::size_t(m), std::vector<double>(std::size_t(k), 0.0));
  const bool have_w = W && !W->empty();
  const bool have_b = Bfield && !Bfield->empty();
  if (!have_w && !have_b) return tns;

  for (int node = 0; node < m; ++node) {
    const double s = tns.s_nodes[std::size_t(node)];
    VectorField Wf(g), Bf(g), G(g);
    if (have_w) {
      Wf = resample_node(*W, s);
      G += Wf;
    }
    if (have_b) {
      Bf = resample_node(*Bfield, s);
      G += Bf;
    }
    const auto dG = spectral_jacobian(G);

    for (int i = 0; i < k; ++i) {
      const BasisMode& mi = basis.mode(i);
      const Vec3 ki = basis.kappa(i);
      VectorField gi(g);
      for (int kk = 0; kk < g.n; ++kk)
        for (int jj = 0; jj < g.n; ++jj)
          for (int ii = 0; ii < g.n; ++ii) {
            const std::int64_t idx = g.index(ii, jj, kk);
            const Vec3 y = g.node(ii, jj, kk);
            const double phase = dot(ki, y);
            const double trig = c * (mi.is_sin ? std::sin(phase) : std::cos(phase));
            const double dtrig = c * (mi.is_sin ? std::cos(phase) : -std::sin(phase));
            const Vec3 gv = G.node_value(idx);
            // -(a_i . grad) G - (G . grad) a_i
            Vec3 val = mi.e * (-dot(gv, ki) * dtrig);
            for (int comp = 0; comp < 3; ++comp) {
              double adv = 0.0;
              for (int d = 0; d < 3; ++d)
                adv += mi.e[d] * dG[std::size_t(comp)][std::size_t(d)][idx];
              val[comp] -= trig * adv;
            }
            gi.set_node_value(idx, val);
          }
      project_onto_basis(basis, gi, &tns.A[std::size_t(node)][std::size_t(i) * k], k, 1.0);
    }

    if (have_w) {
      // R(W) = ds W - lap W - W/2 - (y/2).grad W (masked) + B.grad W
      //        + W.grad B + W.grad W, plus the rotation coupling.
      VectorField rw(g);

      // ds W by centered differences on the stored trajectory nodes.
      if (have_w && W->n_nodes() > 1) {
        const double hs = period > 0.0 ? period / m : 0.0;
        if (hs > 0.0) {
          VectorField fwd = resample_node(*W, s + hs);
          fwd -= resample_node(*W, s - hs + (s - hs < 0.0 ? period : 0.0));
          fwd *= 1.0 / (2.0 * hs);
          rw += fwd;
        }
      }

      rw -= spectral_laplacian(Wf);
      {
        VectorField half = Wf;
        half *= 0.5;
        rw -= half;
      }
      const auto dW = spectral_jacobian(Wf);
      const auto dB = have_b ? spectral_jacobian(Bf) : dG;  // dG unused when !have_b
      for (int kk = 0; kk < g.n; ++kk)
        for (int jj = 0; jj < g.n; ++jj)
          for (int ii = 0; ii < g.n; ++ii) {
            const std::int64_t idx = g.index(ii, jj, kk);
            const Vec3 y = g.node(ii, jj, kk);
            const double mask = opt.mask.value(norm(y), L);
            const Vec3 wv = Wf.node_value(idx);
            const Vec3 bv = have_b ? Bf.node_value(idx) : Vec3{};
            Vec3 val = rw.node_value(idx);
            for (int comp = 0; comp < 3; ++comp) {
              const auto& row = dW[std::size_t(comp)];
              const double wx = row[0][idx], wy = row[1][idx], wz = row[2][idx];
              // -(y/2 + alpha J y) . grad W, masked together
              val[comp] -= mask * 0.5 * (y.x * wx + y.y * wy + y.z * wz);
              if (opt.alpha != 0.0)
                val[comp] -= mask * opt.alpha * (-y.y * wx + y.x * wy);
              // (W + B) . grad W
              val[comp] += (wv.x + bv.x) * wx + (wv.y + bv.y) * wy + (wv.z + bv.z) * wz;
              // W . grad B
              if (have_b)
                val[comp] += wv.x * dB[std::size_t(comp)][0][idx] +
                             wv.y * dB[std::size_t(comp)][1][idx] +
                             wv.z * dB[std::size_t(comp)][2][idx];
            }
            if (opt.alpha != 0.0) {
              val.x += opt.alpha * -wv.y;
              val.y += opt.alpha * wv.x;
            }
            rw.set_node_value(idx, val);
          }
      project_onto_basis(basis, rw, tns.C[std::size_t(node)].data(), k, -1.0);
    }
  }
  return tns;
}

}  // namespace lprf
