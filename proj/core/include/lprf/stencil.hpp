// Finite-difference machinery: Fornberg differentiation weights on arbitrary
// node sets, and 4th-order derivatives of box fields (centered stencils in
// the interior, shifted windows at the faces; the box is not assumed
// periodic here).

#ifndef LPRF_STENCIL_H
#define LPRF_STENCIL_H

#include <vector>

#include "lprf/field.hpp"

namespace lprf {

// Weights w_i with  f^(m)(x0) ~= sum_i w_i f(xs[i]);  exact for polynomials
// of degree < xs.size().  (Fornberg's recurrence.)
std::vector<double> diff_weights(double x0, const std::vector<double>& xs, int m);

// d^m/d(axis)^m at 4th order; m = 1 or 2.
ScalarField fd_derivative(const ScalarField& f, int axis, int m = 1);
VectorField fd_derivative(const VectorField& f, int axis, int m = 1);

ScalarField fd_divergence(const VectorField& f);
VectorField fd_gradient(const ScalarField& f);
VectorField fd_laplacian(const VectorField& f);
// (u . grad) v
VectorField fd_advect(const VectorField& u, const VectorField& v);

}  // namespace lprf

#endif
