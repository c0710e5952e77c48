#include "mml/measure.hpp"

#include "mml/error.hpp"
#include "mml/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mml {

namespace {

// phi'' = log|u|, phi(0) = 0; the cell-cell log integral is a double
// difference of phi over the corner gaps.
double phi(double u) {
  if (u == 0.0) return 0.0;
  return 0.5 * u * u * std::log(std::abs(u)) - 0.75 * u * u;
}

// Antiderivative of log|x - y| in y: Phi(u) = u log|u| - u at u = y - x.
double Phi(double u) {
  if (u == 0.0) return 0.0;
  return u * std::log(std::abs(u)) - u;
}

// integral over [a,b] of log|x - y| dy.
double cell_log(double x, double a, double b) { return Phi(b - x) - Phi(a - x); }

// double integral of log|x - y| over [a,b] x [c,d].
double cell_cell_log(double a, double b, double c, double d) {
  return phi(b - c) + phi(a - d) - phi(a - c) - phi(b - d);
}

double sinc(double z) {
  if (std::abs(z) < 1e-6) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

struct Component {
  double center;
  double width; // 0 for atoms
  double mass;
};

std::vector<Component> components(const SignedMeasure& m) {
  std::vector<Component> v;
  v.reserve(m.atoms.size() + m.cells.size());
  for (const auto& a : m.atoms) v.push_back({a.x, 0.0, a.w});
  for (const auto& c : m.cells) v.push_back({0.5 * (c.lo + c.hi), c.hi - c.lo, c.mass});
  return v;
}

} // namespace

void SignedMeasure::add_cell(double lo, double hi, double mass) {
  require(lo < hi, errc::invalid_argument, "SignedMeasure cell must have positive width");
  cells.push_back({lo, hi, mass});
}

SignedMeasure SignedMeasure::uniform(double lo, double hi, double mass) {
  SignedMeasure m;
  m.add_cell(lo, hi, mass);
  return m;
}

double SignedMeasure::total_charge() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.w;
  for (const auto& c : cells) s += c.mass;
  return s;
}

SignedMeasure SignedMeasure::smeared(double width) const {
  require(width > 0.0, errc::invalid_argument, "smearing width must be positive");
  SignedMeasure m;
  m.cells = cells;
  for (const auto& a : atoms) m.add_cell(a.x - 0.5 * width, a.x + 0.5 * width, a.w);
  return m;
}

double SignedMeasure::integrate(const std::function<double(double)>& f, std::size_t order) const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.w * f(a.x);
  for (const auto& c : cells) {
    const quad::Rule r = quad::gauss_legendre(order, c.lo, c.hi);
    s += c.mass / (c.hi - c.lo) * r.integrate(f);
  }
  return s;
}

double log_energy_bilinear(const SignedMeasure& m1, const SignedMeasure& m2) {
  double s = 0.0;
  for (const auto& a : m1.atoms) {
    for (const auto& b : m2.atoms) {
      if (a.x == b.x) {
        // True self-energy of a point charge; sign follows the weights.
        return a.w * b.w > 0.0 ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
      }
      s -= a.w * b.w * std::log(std::abs(a.x - b.x));
    }
    for (const auto& c : m2.cells)
      s -= a.w * c.mass / (c.hi - c.lo) * cell_log(a.x, c.lo, c.hi);
  }
  for (const auto& c : m1.cells) {
    const double rho1 = c.mass / (c.hi - c.lo);
    for (const auto& b : m2.atoms) s -= b.w * rho1 * cell_log(b.x, c.lo, c.hi);
    for (const auto& d : m2.cells)
      s -= rho1 * d.mass / (d.hi - d.lo) * cell_cell_log(c.lo, c.hi, d.lo, d.hi);
  }
  return s;
}

double log_energy_fourier(const SignedMeasure& m1, const SignedMeasure& m2,
                          const FourierEnergyOptions& opts) {
  require(std::abs(m1.total_charge()) < 1e-12, errc::invalid_argument,
          "log_energy_fourier requires zero total charge in the first argument");
  const auto c1 = components(m1);
  const auto c2 = components(m2);
  if (c1.empty() || c2.empty()) return 0.0;

  // Pair table: m1^(p) m2^(-p) = sum over pairs of m_j m_k sinc(p w_j/2)
  // sinc(p w_k/2) cos(p (c_j - c_k)).  Zero net charge lets us subtract 1
  // from each oscillating factor, which removes the 1/p singularity exactly.
  struct Pair {
    double mm, dc, hw1, hw2;
  };
  std::vector<Pair> pairs;
  pairs.reserve(c1.size() * c2.size());
  double extent = 0.0, min_width = std::numeric_limits<double>::infinity();
  double diag_abs = 0.0;
  for (const auto& u : c1) {
    extent = std::max(extent, std::abs(u.center) + u.width);
    if (u.width > 0.0) min_width = std::min(min_width, u.width);
    for (const auto& v : c2) {
      pairs.push_back({u.mass * v.mass, u.center - v.center, 0.5 * u.width, 0.5 * v.width});
      if (u.center == v.center) diag_abs += std::abs(u.mass * v.mass);
    }
  }
  for (const auto& v : c2) {
    extent = std::max(extent, std::abs(v.center) + v.width);
    if (v.width > 0.0) min_width = std::min(min_width, v.width);
  }

  double p_max = opts.p_max;
  if (p_max <= 0.0) {
    if (std::isfinite(min_width)) {
      // Non-oscillatory sinc^2 tails decay like S2/(p^3 w^2); choose the cut
      // so the truncated mass stays near 1e-5.
      p_max = std::sqrt(std::max(diag_abs, 1.0) / (min_width * min_width * 1e-5));
      p_max = std::clamp(p_max, 2e4, 1e6);
    } else {
      p_max = 6e4; // atoms only: conditionally convergent oscillatory tail
    }
  }
  double panel = opts.panel_width;
  if (panel <= 0.0) panel = std::max(0.05, 3.141592653589793 / (4.0 * std::max(extent, 0.25)));

  const std::size_t panels = static_cast<std::size_t>(std::ceil(p_max / panel));
  const quad::Rule base = quad::gauss_legendre(opts.order, 0.0, 1.0);
  double total = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double plo = panel * static_cast<double>(k);
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      const double p = plo + panel * base.nodes[i];
      if (p == 0.0) continue;
      double g = 0.0;
      for (const auto& pr : pairs) {
        const double f = sinc(p * pr.hw1) * sinc(p * pr.hw2) * std::cos(p * pr.dc);
        g += pr.mm * (f - 1.0); // sum of pr.mm vanishes (zero charge)
      }
      total += panel * base.weights[i] * g / p;
    }
  }
  return total;
}

} // namespace mml
