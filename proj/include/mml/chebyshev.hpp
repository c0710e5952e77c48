#pragma once

#include <cstddef>
#include <vector>

namespace mml::cheb {

// Coefficients a_k of f = sum a_k T_k from values on the Chebyshev-Lobatto
// grid t_j = cos(j*pi/m), j = 0..m (values in that node order).  Direct
// O(m^2) cosine transform; m stays in the hundreds here.
std::vector<double> coeffs_from_lobatto(const std::vector<double>& values);

// Clenshaw evaluation of sum a_k T_k(t), t in [-1, 1].
double eval_t_series(const std::vector<double>& a, double t);

// Clenshaw evaluation of sum c_k U_k(t) (second kind), t in [-1, 1].
double eval_u_series(const std::vector<double>& c, double t);

} // namespace mml::cheb
