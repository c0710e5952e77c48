#include "mml/potential.hpp"

#include "mml/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mml {

namespace {
constexpr double pi = 3.141592653589793238462643383279503;

double poly_derivative(const std::vector<double>& c, double x, int order) {
  // Horner on the order-th derivative's coefficients.
  double s = 0.0;
  for (std::size_t k = c.size(); k-- > static_cast<std::size_t>(order);) {
    double f = 1.0;
    for (int j = 0; j < order; ++j) f *= static_cast<double>(k - j);
    s = s * x + f * c[k];
  }
  return s;
}
} // namespace

Potential Potential::gaussian(double epsilon, double clip_radius) {
  return even_polynomial({0.0, 0.0, 0.5}, epsilon, clip_radius);
}

Potential Potential::quartic(double g, double t, double epsilon, double clip_radius) {
  require(g > 0.0, errc::invalid_argument, "quartic potential requires g > 0");
  Potential p = even_polynomial({0.0, 0.0, 0.5 * t, 0.0, 0.25 * g}, epsilon, clip_radius);
  p.kind_ = PotentialKind::quartic;
  return p;
}

Potential Potential::even_polynomial(std::vector<double> coeffs, double epsilon,
                                     double clip_radius) {
  require(epsilon > 0.0, errc::invalid_argument, "epsilon must be positive");
  require(clip_radius > 0.0, errc::invalid_argument, "clip_radius must be positive");
  require(!coeffs.empty(), errc::invalid_argument, "empty coefficient list");
  Potential p;
  // gaussian is stored as the polynomial (0,0,1/2); keep its own kind tag.
  p.kind_ = (coeffs.size() == 3 && coeffs[0] == 0.0 && coeffs[1] == 0.0 && coeffs[2] == 0.5)
                ? PotentialKind::gaussian
                : PotentialKind::even_polynomial;
  p.epsilon_ = epsilon;
  p.clip_ = clip_radius;
  p.coeffs_ = std::move(coeffs);
  return p;
}

Potential Potential::user_table(std::vector<double> xs, std::vector<double> ys, double epsilon,
                                double clip_radius) {
  require(epsilon > 0.0, errc::invalid_argument, "epsilon must be positive");
  require(clip_radius > 0.0, errc::invalid_argument, "clip_radius must be positive");
  require(xs.size() == ys.size(), errc::invalid_argument, "table size mismatch");
  require(xs.size() >= 2, errc::invalid_argument, "table needs at least two nodes");
  for (std::size_t i = 1; i < xs.size(); ++i)
    require(xs[i] > xs[i - 1], errc::invalid_argument, "table abscissae must be increasing");

  Potential p;
  p.kind_ = PotentialKind::user_table;
  p.epsilon_ = epsilon;
  p.clip_ = clip_radius;
  p.xs_ = std::move(xs);
  p.ys_ = std::move(ys);

  // Natural cubic spline: solve the tridiagonal system for the second
  // derivatives y2 (Thomas algorithm), with y2 = 0 at both ends.
  const std::size_t n = p.xs_.size();
  p.y2_.assign(n, 0.0);
  if (n > 2) {
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double sig = (p.xs_[i] - p.xs_[i - 1]) / (p.xs_[i + 1] - p.xs_[i - 1]);
      const double den = sig * p.y2_[i - 1] + 2.0;
      p.y2_[i] = (sig - 1.0) / den;
      const double d = (p.ys_[i + 1] - p.ys_[i]) / (p.xs_[i + 1] - p.xs_[i]) -
                       (p.ys_[i] - p.ys_[i - 1]) / (p.xs_[i] - p.xs_[i - 1]);
      u[i] = (6.0 * d / (p.xs_[i + 1] - p.xs_[i - 1]) - sig * u[i - 1]) / den;
    }
    for (std::size_t i = n - 1; i-- > 1;) p.y2_[i] = p.y2_[i] * p.y2_[i + 1] + u[i];
  }
  return p;
}

double Potential::eval_base(double lambda, int order) const {
  if (kind_ != PotentialKind::user_table) return poly_derivative(coeffs_, lambda, order);

  require(order <= 2, errc::unsupported_derivative,
          "third derivative is unsupported for table potentials");
  const std::size_t n = xs_.size();
  // Beyond the table range the spline is continued linearly (C^1).
  if (lambda <= xs_.front() || lambda >= xs_.back()) {
    const bool left = lambda <= xs_.front();
    const std::size_t i = left ? 0 : n - 2;
    const double h = xs_[i + 1] - xs_[i];
    const double edge = left ? xs_.front() : xs_.back();
    // Spline slope at the boundary node.
    const double slope = (ys_[i + 1] - ys_[i]) / h -
                         (left ? (2.0 * y2_[i] + y2_[i + 1]) : -(y2_[i] + 2.0 * y2_[i + 1])) * h / 6.0;
    const double value = left ? ys_.front() : ys_.back();
    if (order == 0) return value + slope * (lambda - edge);
    if (order == 1) return slope;
    return 0.0;
  }
  const std::size_t i =
      static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), lambda) - xs_.begin()) - 1;
  const std::size_t j = std::min(i, n - 2);
  const double h = xs_[j + 1] - xs_[j];
  const double A = (xs_[j + 1] - lambda) / h;
  const double B = 1.0 - A;
  if (order == 0)
    return A * ys_[j] + B * ys_[j + 1] +
           ((A * A * A - A) * y2_[j] + (B * B * B - B) * y2_[j + 1]) * h * h / 6.0;
  if (order == 1)
    return (ys_[j + 1] - ys_[j]) / h +
           (-(3.0 * A * A - 1.0) * y2_[j] + (3.0 * B * B - 1.0) * y2_[j + 1]) * h / 6.0;
  return A * y2_[j] + B * y2_[j + 1];
}

double Potential::eval(double lambda, int order) const {
  require(order >= 0 && order <= 3, errc::invalid_argument, "derivative order must be in 0..3");
  if (kind_ == PotentialKind::user_table && order == 3)
    fail(errc::unsupported_derivative, "third derivative is unsupported for table potentials");
  if (std::abs(lambda) <= clip_) return eval_base(lambda, order);
  // Linear continuation beyond the clip radius keeps V' bounded.
  const double edge = lambda > 0.0 ? clip_ : -clip_;
  const double slope = eval_base(edge, 1);
  if (order == 0) return eval_base(edge, 0) + slope * (lambda - edge);
  if (order == 1) return slope;
  return 0.0;
}

std::vector<double> Potential::audit_grid() const {
  const std::size_t m = 4096;
  std::vector<double> g(m + 1);
  const double R = 10.0 * clip_;
  for (std::size_t j = 0; j <= m; ++j)
    g[j] = -R * std::cos(pi * static_cast<double>(j) / static_cast<double>(m));
  g.front() = -R;
  g.back() = R;
  return g;
}

ValidationReport Potential::validate() const {
  ValidationReport rep;
  const std::vector<double> grid = audit_grid();

  // Growth condition.  The bound V >= 2(1+eps)log(1+|.|) is asymptotic in
  // substance (adding a constant to V changes nothing in the model), so it is
  // checked where it binds: on audit nodes outside twice the clip radius,
  // together with confining slopes of the linear continuation.
  {
    ValidationCheck c;
    c.name = "growth";
    c.pass = true;
    c.margin = std::numeric_limits<double>::infinity();
    const double slope_r = eval(clip_, 1);
    const double slope_l = eval(-clip_, 1);
    if (!(slope_r > 0.0) || !(slope_l < 0.0)) {
      c.pass = false;
      c.worst_point = slope_r > 0.0 ? -clip_ : clip_;
      c.margin = slope_r > 0.0 ? slope_l : -slope_r;
      c.detail = "linear continuation is not confining";
    }
    for (double x : grid) {
      if (std::abs(x) < 2.0 * clip_) continue;
      const double m = eval(x, 0) - 2.0 * (1.0 + epsilon_) * std::log1p(std::abs(x));
      if (m < c.margin) {
        c.margin = m;
        c.worst_point = x;
      }
      if (!(m >= 0.0)) c.pass = false;
    }
    if (c.detail.empty())
      c.detail = c.pass ? "dominates the logarithm outside 2*clip_radius" : "logarithmic bound violated";
    rep.checks.push_back(c);
  }

  // Nonnegativity on the audit grid.
  {
    ValidationCheck c;
    c.name = "nonnegative";
    c.pass = true;
    c.margin = std::numeric_limits<double>::infinity();
    for (double x : grid) {
      const double v = eval(x, 0);
      if (v < c.margin) {
        c.margin = v;
        c.worst_point = x;
      }
      if (!(v >= 0.0)) c.pass = false;
    }
    c.detail = "min V over audit grid";
    rep.checks.push_back(c);
  }

  // Finite-difference Lipschitz constant of V' on [-L, L].
  {
    ValidationCheck c;
    c.name = "lipschitz";
    c.margin = 0.0;
    double prev_x = 0.0, prev_d = 0.0;
    bool have_prev = false;
    for (double x : grid) {
      if (std::abs(x) > clip_) continue;
      const double d = eval(x, 1);
      if (have_prev && x > prev_x) {
        const double ratio = std::abs(d - prev_d) / (x - prev_x);
        if (ratio > c.margin) {
          c.margin = ratio;
          c.worst_point = x;
        }
      }
      prev_x = x;
      prev_d = d;
      have_prev = true;
    }
    c.pass = std::isfinite(c.margin);
    c.detail = "estimated Lipschitz constant of V' on [-L, L]";
    rep.checks.push_back(c);
  }

  if (kind_ == PotentialKind::even_polynomial || kind_ == PotentialKind::quartic ||
      kind_ == PotentialKind::gaussian) {
    ValidationCheck c;
    c.name = "leading-coefficient";
    double lead = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
      if (coeffs_[k] != 0.0) {
        lead = coeffs_[k];
        break;
      }
    }
    c.pass = lead > 0.0 && coeffs_.size() >= 3;
    c.margin = lead;
    c.detail = "leading polynomial coefficient";
    rep.checks.push_back(c);
  }

  if (kind_ == PotentialKind::user_table) {
    ValidationCheck c;
    c.name = "resolution";
    c.pass = xs_.size() >= 4;
    c.margin = static_cast<double>(xs_.size());
    c.detail = "table node count (>= 4 required for a meaningful cubic interpolant)";
    for (double y : ys_)
      if (!std::isfinite(y)) c.pass = false;
    rep.checks.push_back(c);
  }

  return rep;
}

} // namespace mml
