#pragma once
// Hole (gap) probabilities: Fredholm determinants of symmetric kernels by
// Nystrom quadrature, the universal sine kernel, and the finite-n hole
// probability of the Christoffel-Darboux kernel on a bulk-rescaled interval.

#include "mml/kernel.hpp"

#include <cstddef>
#include <functional>

namespace mml {

// S(x) = sin(pi x)/(pi x); removable singularity handled by series.
double sine_kernel(double x);

struct GapResult {
  double value = 1.0;
  std::size_t quadrature_order = 0;
  double richardson_error_estimate = 0.0; // |order vs order/2| difference
};

// det(I - W^{1/2} K W^{1/2}) on Gauss-Legendre nodes of [lo, hi].
GapResult fredholm_det(const std::function<double(double, double)>& kernel,
                       double lo, double hi, std::size_t order = 64);

// E_{n,2}([lambda0, lambda0 + s/(n rho_n(lambda0))]) via the rescaled CD
// kernel on [0, s].
GapResult hole_probability(const KernelField& f, double lambda0, double s,
                           std::size_t order = 64);

} // namespace mml
