#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace mml::quad {

using Integrand = std::function<double(double)>;

// Positive quadrature rule on (lo, hi): sum of weights equals hi - lo.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lo = 0.0;
  double hi = 0.0;

  double integrate(const Integrand& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// Gauss-Legendre rule, nodes by Newton iteration on P_m (exact for degree 2m-1).
Rule gauss_legendre(std::size_t m, double lo, double hi);

// Composite Gauss-Legendre: `panels` equal subintervals of [lo, hi], `order`
// nodes each.
Rule composite(std::size_t panels, std::size_t order, double lo, double hi);

// Composite rule over a union of disjoint intervals (each split into `panels`
// pieces of `order` nodes).  Intervals must be ascending and non-overlapping.
Rule composite_union(const std::vector<std::pair<double, double>>& intervals,
                     std::size_t panels, std::size_t order);

// p.v. integral of f(mu)/(lambda - mu) over the rule's interval, computed by
// subtracting the singularity: the difference quotient (f(mu)-f(lambda))/(lambda-mu)
// is smooth and integrated by the rule, and the remaining 1/(lambda-mu) factor
// integrates to the exact log-ratio log((lambda-lo)/(hi-lambda)).
double principal_value(const Integrand& f, double singularity, const Rule& rule);

// Chebyshev-Lobatto grid on [a, b]: node(j) = mid + half*cos(j*pi/m),
// j = 0..m (so node(0) = b and node(m) = a).  Supports barycentric
// interpolation, exact for polynomials of degree <= m.
struct ChebGrid {
  std::size_t order = 0; // m
  double a = 0.0;
  double b = 0.0;

  ChebGrid() = default;
  ChebGrid(std::size_t m, double a_, double b_);

  double node(std::size_t j) const;
  std::size_t size() const { return order + 1; } // number of nodes

  // Barycentric interpolation of values (one per node, in node order).
  double interpolate(const std::vector<double>& values, double x) const;

private:
  std::vector<double> cosines_; // cos(j*pi/m), cached
};

} // namespace mml::quad
