#include "mml/quadrature.hpp"

#include "mml/error.hpp"

#include <cmath>

namespace mml::quad {

namespace {

constexpr double pi = 3.141592653589793238462643383279503;

// Nodes and weights of the m-point rule on [-1, 1].  Classic Newton iteration
// with the Tricomi initial guess; converges to machine precision in < 20 steps.
void legendre_reference(std::size_t m, std::vector<double>& x, std::vector<double>& w) {
  x.assign(m, 0.0);
  w.assign(m, 0.0);
  const std::size_t half = (m + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(m) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Evaluate P_m(z) and P'_m(z) by the three-term recurrence.
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * z * p1 - static_cast<double>(k) * p2) / (k + 1.0);
      }
      pp = m * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[m - 1 - i] = z;
    w[i] = w[m - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

} // namespace

Rule gauss_legendre(std::size_t m, double lo, double hi) {
  require(m >= 1, errc::invalid_argument, "gauss_legendre: need at least one node");
  require(lo < hi, errc::invalid_argument, "gauss_legendre: empty or reversed interval");
  std::vector<double> x, w;
  legendre_reference(m, x, w);
  Rule r;
  r.lo = lo;
  r.hi = hi;
  r.nodes.resize(m);
  r.weights.resize(m);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < m; ++i) {
    r.nodes[i] = mid + half * x[i];
    r.weights[i] = half * w[i];
  }
  return r;
}

Rule composite(std::size_t panels, std::size_t order, double lo, double hi) {
  require(panels >= 1, errc::invalid_argument, "composite: need at least one panel");
  require(lo < hi, errc::invalid_argument, "composite: empty or reversed interval");
  Rule r;
  r.lo = lo;
  r.hi = hi;
  r.nodes.reserve(panels * order);
  r.weights.reserve(panels * order);
  for (std::size_t p = 0; p < panels; ++p) {
    const double plo = lo + (hi - lo) * static_cast<double>(p) / static_cast<double>(panels);
    const double phi = lo + (hi - lo) * static_cast<double>(p + 1) / static_cast<double>(panels);
    Rule sub = gauss_legendre(order, plo, phi);
    r.nodes.insert(r.nodes.end(), sub.nodes.begin(), sub.nodes.end());
    r.weights.insert(r.weights.end(), sub.weights.begin(), sub.weights.end());
  }
  return r;
}

Rule composite_union(const std::vector<std::pair<double, double>>& intervals,
                     std::size_t panels, std::size_t order) {
  require(!intervals.empty(), errc::invalid_argument, "composite_union: no intervals");
  Rule r;
  r.lo = intervals.front().first;
  r.hi = intervals.back().second;
  double prev = r.lo;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const auto [lo, hi] = intervals[k];
    require(lo < hi, errc::invalid_argument, "composite_union: empty interval");
    require(k == 0 || lo >= prev, errc::invalid_argument, "composite_union: overlapping intervals");
    prev = hi;
    Rule sub = composite(panels, order, lo, hi);
    r.nodes.insert(r.nodes.end(), sub.nodes.begin(), sub.nodes.end());
    r.weights.insert(r.weights.end(), sub.weights.begin(), sub.weights.end());
  }
  return r;
}

double principal_value(const Integrand& f, double singularity, const Rule& rule) {
  require(singularity > rule.lo && singularity < rule.hi, errc::invalid_argument,
          "principal_value: singularity must lie strictly inside the interval");
  const double flam = f(singularity);
  const double scale = std::max(1.0, std::abs(singularity));
  const double coincidence = 1e-13 * scale;
  // Slope of f at the singularity, used only when a node lands on it:
  // the difference quotient has the removable limit -f'(lambda).
  double fprime = 0.0;
  bool have_fprime = false;
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double mu = rule.nodes[i];
    const double d = singularity - mu;
    if (std::abs(d) < coincidence) {
      if (!have_fprime) {
        const double h = 1e-6 * scale;
        fprime = (f(singularity + h) - f(singularity - h)) / (2.0 * h);
        have_fprime = true;
      }
      s += rule.weights[i] * (-fprime);
    } else {
      s += rule.weights[i] * (f(mu) - flam) / d;
    }
  }
  return s + flam * std::log((singularity - rule.lo) / (rule.hi - singularity));
}

ChebGrid::ChebGrid(std::size_t m, double a_, double b_) : order(m), a(a_), b(b_) {
  require(m >= 1, errc::invalid_argument, "ChebGrid: order must be >= 1");
  require(a_ < b_, errc::invalid_argument, "ChebGrid: empty or reversed interval");
  cosines_.resize(m + 1);
  for (std::size_t j = 0; j <= m; ++j)
    cosines_[j] = std::cos(pi * static_cast<double>(j) / static_cast<double>(m));
  cosines_[0] = 1.0;
  cosines_[m] = -1.0;
}

double ChebGrid::node(std::size_t j) const {
  require(j <= order, errc::invalid_argument, "ChebGrid::node: index out of range");
  return 0.5 * (a + b) + 0.5 * (b - a) * cosines_[j];
}

double ChebGrid::interpolate(const std::vector<double>& values, double x) const {
  require(values.size() == order + 1, errc::invalid_argument,
          "ChebGrid::interpolate: one value per node required");
  // Barycentric weights for the Lobatto grid are (-1)^j, halved at the ends.
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j <= order; ++j) {
    const double xj = node(j);
    const double d = x - xj;
    if (d == 0.0) return values[j];
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == order) w *= 0.5;
    num += w / d * values[j];
    den += w / d;
  }
  return num / den;
}

} // namespace mml::quad
