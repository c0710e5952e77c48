#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mml {

enum class PotentialKind { gaussian, quartic, even_polynomial, user_table };

struct ValidationCheck {
  std::string name;    // "growth", "nonnegative", "lipschitz", "leading-coefficient", "resolution"
  bool pass = false;
  double worst_point = 0.0; // audit node where the check is tightest / fails
  double margin = 0.0;      // signed slack at worst_point (or the fitted constant)
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Confining potential V with derivatives up to order 3.  Immutable after
// construction; eval is pure.  Outside clip_radius the potential is continued
// linearly (C^1), so V' is bounded and derivative orders >= 2 vanish there.
class Potential {
public:
  static constexpr double default_epsilon = 0.5;
  static constexpr double default_clip = 10.0;

  static Potential gaussian(double epsilon = default_epsilon, double clip_radius = default_clip);
  static Potential quartic(double g, double t, double epsilon = default_epsilon,
                           double clip_radius = default_clip);
  // coeffs[k] multiplies lambda^k (an even potential has only even entries).
  static Potential even_polynomial(std::vector<double> coeffs, double epsilon = default_epsilon,
                                   double clip_radius = default_clip);
  // Natural cubic spline through (xs, ys); continued linearly beyond the
  // table range.  Third derivatives are unsupported for this kind.
  static Potential user_table(std::vector<double> xs, std::vector<double> ys,
                              double epsilon = default_epsilon, double clip_radius = default_clip);

  double eval(double lambda, int order = 0) const;
  double operator()(double lambda) const { return eval(lambda, 0); }

  PotentialKind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  double clip_radius() const { return clip_; }
  // Polynomial coefficients (poly kinds) or empty (table kind).
  const std::vector<double>& coefficients() const { return coeffs_; }
  const std::vector<double>& table_x() const { return xs_; }
  const std::vector<double>& table_y() const { return ys_; }

  // Audit-grid hypothesis checks; failures are reported, never thrown.
  ValidationReport validate() const;

  // Fixed audit grid: 4097 Chebyshev-spaced points on [-10L, 10L].
  std::vector<double> audit_grid() const;

private:
  Potential() = default;

  double eval_base(double lambda, int order) const; // without the clip continuation

  PotentialKind kind_ = PotentialKind::gaussian;
  double epsilon_ = default_epsilon;
  double clip_ = default_clip;
  std::vector<double> coeffs_;        // poly kinds
  std::vector<double> xs_, ys_, y2_;  // table kind (y2_ = spline second derivatives)
};

} // namespace mml
