#include "mml/chebyshev.hpp"

#include <cmath>

namespace mml::cheb {

namespace {
constexpr double pi = 3.141592653589793238462643383279503;
}

std::vector<double> coeffs_from_lobatto(const std::vector<double>& values) {
  const std::size_t m = values.size() - 1;
  std::vector<double> a(m + 1, 0.0);
  if (m == 0) {
    a[0] = values[0];
    return a;
  }
  for (std::size_t k = 0; k <= m; ++k) {
    double s = 0.5 * (values[0] + ((k % 2 == 0) ? values[m] : -values[m]));
    for (std::size_t j = 1; j < m; ++j)
      s += values[j] * std::cos(pi * static_cast<double>(k * j) / static_cast<double>(m));
    const double ck = (k == 0 || k == m) ? 2.0 : 1.0;
    a[k] = 2.0 * s / (static_cast<double>(m) * ck);
  }
  return a;
}

double eval_t_series(const std::vector<double>& a, double t) {
  if (a.empty()) return 0.0;
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = a.size() - 1; k >= 1; --k) {
    const double b0 = a[k] + 2.0 * t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return a[0] + t * b1 - b2;
}

double eval_u_series(const std::vector<double>& c, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) {
    const double b0 = c[k] + 2.0 * t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return b1; // b_0 after the final iteration
}

} // namespace mml::cheb
