#include "mml/gap.hpp"

#include "mml/error.hpp"
#include "mml/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace mml {

double sine_kernel(double x) {
  const double z = 3.141592653589793238462643383279503 * x;
  if (std::abs(x) < 1e-4) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

namespace {

double nystrom_det(const std::function<double(double, double)>& kernel,
                   double lo, double hi, std::size_t order) {
  const quad::Rule rule = quad::gauss_legendre(order, lo, hi);
  Eigen::MatrixXd A(order, order);
  for (std::size_t i = 0; i < order; ++i) {
    const double si = std::sqrt(rule.weights[i]);
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = si * std::sqrt(rule.weights[j]) * kernel(rule.nodes[i], rule.nodes[j]);
      A(i, j) = (i == j ? 1.0 : 0.0) - v;
      A(j, i) = A(i, j);
    }
  }
  return A.partialPivLu().determinant();
}

} // namespace

GapResult fredholm_det(const std::function<double(double, double)>& kernel,
                       double lo, double hi, std::size_t order) {
  require(order >= 4, errc::invalid_argument, "fredholm_det: order must be >= 4");
  require(lo <= hi, errc::invalid_argument, "fredholm_det: interval reversed");
  GapResult r;
  r.quadrature_order = order;
  if (lo == hi) return r; // det of identity
  r.value = nystrom_det(kernel, lo, hi, order);
  const double coarse = nystrom_det(kernel, lo, hi, order / 2);
  r.richardson_error_estimate = std::abs(r.value - coarse);
  return r;
}

GapResult hole_probability(const KernelField& f, double lambda0, double s,
                           std::size_t order) {
  require(s >= 0.0, errc::invalid_argument, "hole_probability: s must be >= 0");
  const auto [bulk_lo, bulk_hi] = f.bulk_window();
  require(lambda0 >= bulk_lo && lambda0 <= bulk_hi, errc::invalid_argument,
          "hole_probability: lambda0 outside the bulk window");
  if (s == 0.0) {
    GapResult r;
    r.quadrature_order = order;
    return r;
  }
  const double nr = static_cast<double>(f.n()) * f.density(lambda0);
  require(nr > 0.0, errc::invalid_argument,
          "hole_probability: vanishing density at lambda0 (not in the bulk)");
  const auto resc = [&](double x, double y) {
    return f.kernel(lambda0 + x / nr, lambda0 + y / nr) / nr;
  };
  return fredholm_det(resc, 0.0, s, order);
}

} // namespace mml
