// Spectral Galerkin solver for the similarity-profile equation on the
// periodic box: divergence-free trigonometric basis, assembly of the
// mollified coefficient system
//   d/ds b_j = sum_i A_ij(s) b_i + sum_il B_ilj b_i b_l + C_j(s),
// one-period integration with an integrating-factor Heun scheme, periodic
// fixed point b(T) = b(0), and pressure recovery for the composed profile.

#ifndef LPRF_GALERKIN_H
#define LPRF_GALERKIN_H

#include <array>
#include <functional>
#include <vector>

#include "lprf/field.hpp"
#include "lprf/geometry.hpp"
#include "lprf/profile.hpp"

namespace lprf {

// One real solenoidal trigonometric mode sqrt(2/V) trig(kappa . y) e with
// e . kappa = 0 and |e| = 1: exactly divergence free, unit L2 norm, and the
// family over distinct (n, polarization, trig) is exactly orthonormal.
struct BasisMode {
  std::array<int, 3> n{};  // integer wavevector, canonical half lattice
  Vec3 e{};                // unit polarization, perpendicular to kappa
  bool is_sin = false;     // cos mode otherwise
};

// Divergence-free orthonormal basis on the periodic box, ordered by
// increasing |n|^2 with lexicographic (n, polarization, trig) tie-break.
// The mean mode is excluded: the span is dense in the mean-free solenoidal
// space as the count grows.
class Basis {
 public:
  Basis() = default;
  Basis(const BoxGrid& grid, std::vector<BasisMode> modes)
      : grid_(grid), modes_(std::move(modes)) {}

  const BoxGrid& grid() const { return grid_; }
  int size() const { return int(modes_.size()); }
  const BasisMode& mode(int i) const { return modes_[std::size_t(i)]; }

  Vec3 kappa(int i) const;          // (pi / L) n
  double kappa2(int i) const;       // |kappa|^2
  double normalization() const;     // sqrt(2 / V)
  VectorField field(int i) const;   // mode sampled on the grid

  // Coefficient expansion sum_i b_i a_i sampled on the grid.
  VectorField synthesize(const std::vector<double>& b) const;

 private:
  BoxGrid grid_{2, 1.0};
  std::vector<BasisMode> modes_;
};

// First k modes on the grid's box. Throws when a needed wavevector is not
// resolvable (max |n_d| must stay below n/2 so both trig parts exist).
Basis make_basis(const BoxGrid& grid, int k);

// Radial quintic-smoothstep mask, 1 for r <= inner and 0 for r >= outer.
// The unbounded drift (y/2) . grad and the rotation advection are multiplied
// by it so they vanish before the periodic wrap; inner/outer are recorded
// configuration values. Defaults: 0.8 L and 0.95 L.
struct DriftMask {
  double inner = -1.0;
  double outer = -1.0;
  double value(double r, double L) const;
};

struct TensorOptions {
  double alpha = 0.0;  // rotation rate of the frame; adds the exact
                       // alpha (J a - (J y).grad a) coupling when nonzero
  DriftMask mask;
  int n_s = 8;  // coefficient nodes per period for time-dependent W or B
};

// Assembled coefficient system. A and C are stored per s-node and linearly
// interpolated (periodic wrap when period > 0); B is s-independent. stiff
// holds the exact -|kappa_j|^2 diagonal that the integrator treats exactly.
struct GalerkinTensors {
  int k = 0;
  double eps = 0.0;
  double period = 0.0;               // 0: steady coefficients
  std::vector<double> s_nodes;       // assembly nodes, first = 0
  std::vector<std::vector<double>> A;  // per node, row-major, A[i * k + j]
  std::vector<double> B;             // B[(i * k + l) * k + j]
  std::vector<std::vector<double>> C;  // per node, length k
  std::vector<double> stiff;         // -|kappa_j|^2

  void A_at(double s, std::vector<double>& out) const;
  void C_at(double s, std::vector<double>& out) const;
};

// Coefficients of the mollified perturbed system over the backgrounds W and
// B (either may be empty):
//   A_ij = -(grad a_i, grad a_j) + (a_i / 2 + (y/2) . grad a_i, a_j)
//          - (a_i . grad (W + B), a_j) - ((W + B) . grad a_i, a_j)
//   B_ilj = -((eta_eps * a_i) . grad a_l, a_j)     (exact closed form)
//   C_j = -(R(W), a_j)
// with R(W) the background residual ds W - lap W - W/2 - (y/2) . grad W
// + B . grad W + W . grad B + W . grad W (plus the rotation terms when
// alpha is nonzero), assembled with the same drift mask.
GalerkinTensors assemble_tensors(const Basis& basis, const ProfileTrajectory* W,
                                 const ProfileTrajectory* Bfield, double eps,
                                 const TensorOptions& opt = {});

struct CoeffTrajectory {
  std::vector<double> s;
  std::vector<std::vector<double>> b;
};

// Largest explicit-part step the assembly supports: 0.5 over the max row sum
// of |A| (stiff diagonal excluded) plus the cubic term at coefficient scale
// rho.
double stability_timestep(const GalerkinTensors& tns, double rho);

// One period of the coefficient ODE from b0, uniform steps (dt must divide
// T). Integrating-factor Heun: the stiff diagonal is integrated exactly, the
// rest explicitly at second order. Throws on blow-up, naming the first bad
// node.
CoeffTrajectory integrate_period(const GalerkinTensors& tns, const std::vector<double>& b0,
                                 double T, double dt);

struct FixedPointResult {
  std::vector<double> b;        // fixed point of the period map
  double residual = 0.0;        // |T(b) - b|_2 at the returned point
  int iterations = 0;
  bool converged = false;
  double theta_final = 0.0;     // damping in effect at exit
  double rho = 0.0;             // certificate ball radius
  bool ball_certified = false;  // every probe with |b| <= rho mapped inside
  double max_image_norm = 0.0;  // largest |T(b)| over certified probes
};

// Damped Picard iteration b <- (1 - theta) b + theta T(b) with Anderson
// acceleration (window 5) and adaptive halving of theta on residual growth,
// finished by a difference-Newton polish when the damped phase stalls.
// Brouwer gives existence, not contraction, hence the damping. Every
// evaluation doubles as a ball-invariance probe at radius rho. theta0 is the
// starting damping weight in (0, 1].
FixedPointResult periodic_fixed_point(
    const std::function<std::vector<double>(const std::vector<double>&)>& period_map,
    const std::vector<double>& b0, double rho, double tol, int max_iter, double theta0 = 0.5);

struct GalerkinParams {
  double dt = 0.0;          // 0: choose from the stability bound, snapped to T
  double fp_tol = 1e-10;
  int fp_max_iter = 200;
  double rho = 0.0;         // 0: twice the sup of a trial orbit from zero
  double fp_damping = 0.5;  // initial damping weight of the fixed point
};

struct GalerkinState {
  CoeffTrajectory coeffs;   // periodic orbit over [0, T]
  int k = 0;
  double eps = 0.0;
  double dt = 0.0;
  FixedPointResult fp;
  double energy_linf = 0.0;    // sup_s |b(s)|_2 = sup_s L2 norm of U
  double energy_l2h1 = 0.0;    // (integral over the period of |grad U|^2)^1/2
  double combined_norm = 0.0;  // energy_linf + energy_l2h1, the sweep quantity
};

// Assemble-integrate-close: periodic orbit of the coefficient system over
// one period T (taken from the tensors; steady assemblies still integrate
// over the supplied period).
GalerkinState solve_periodic_galerkin(const Basis& basis, const GalerkinTensors& tns,
                                      double T, const GalerkinParams& params = {});

// Profile trajectory U(y, s) = sum_i b_i(s) a_i(y) on the basis grid at the
// orbit's s-nodes, thinned to at most max_nodes (endpoint dropped when it
// wraps to the start).
ProfileTrajectory galerkin_profile(const Basis& basis, const CoeffTrajectory& orbit,
                                   double alpha, double period, int max_nodes = 17);

// Profile pressure from the double Riesz composition
//   p = sum_ij R_i R_j (A_i A_j + A_i B_j + B_i A_j),
// zero mean, node by node (Bfield may be empty for the pure-A products).
// Returns A with the pressure attached.
ProfileTrajectory recover_pressure(const ProfileTrajectory& A, const ProfileTrajectory* Bfield);

}  // namespace lprf

#endif
