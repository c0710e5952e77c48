#include "mml/equilibrium.hpp"

#include "mml/chebyshev.hpp"
#include "mml/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mml {

namespace {

constexpr double pi = 3.141592653589793238462643383279503;

// Endpoint equations F1 = int V'/sqrt, F2 = int t V'/sqrt - 2pi on [a,b],
// with analytic Jacobian via V''.  Gauss-Chebyshev (first kind) absorbs the
// inverse square-root weight exactly.
struct EndpointSystem {
  const Potential& p;
  std::size_t M;
  std::vector<double> x; // Chebyshev abscissae on (-1, 1)

  explicit EndpointSystem(const Potential& pot, std::size_t nodes) : p(pot), M(nodes) {
    x.resize(M);
    for (std::size_t j = 0; j < M; ++j)
      x[j] = std::cos(pi * (2.0 * static_cast<double>(j) + 1.0) / (2.0 * static_cast<double>(M)));
  }

  void eval(double a, double b, double F[2], double J[2][2]) const {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    F[0] = F[1] = 0.0;
    J[0][0] = J[0][1] = J[1][0] = J[1][1] = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
      const double lam = c + r * x[j];
      const double v1 = p.eval(lam, 1);
      const double v2 = p.eval(lam, 2);
      const double da = 0.5 * (1.0 - x[j]); // d lam / d a
      const double db = 0.5 * (1.0 + x[j]); // d lam / d b
      F[0] += v1;
      F[1] += lam * v1;
      J[0][0] += v2 * da;
      J[0][1] += v2 * db;
      J[1][0] += (v1 + lam * v2) * da;
      J[1][1] += (v1 + lam * v2) * db;
    }
    const double w = pi / static_cast<double>(M);
    F[0] *= w;
    F[1] = F[1] * w - 2.0 * pi;
    J[0][0] *= w;
    J[0][1] *= w;
    J[1][0] *= w;
    J[1][1] *= w;
  }
};

bool newton_endpoints(const EndpointSystem& sys, double& a, double& b, double box) {
  double F[2], J[2][2];
  for (int iter = 0; iter < 200; ++iter) {
    if (!(b - a > 1e-8) || std::abs(a) > box || std::abs(b) > box) return false;
    sys.eval(a, b, F, J);
    const double res = std::abs(F[0]) + std::abs(F[1]);
    if (res < 1e-12) return true;
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (!(std::abs(det) > 1e-14)) return false;
    double da = -(F[0] * J[1][1] - F[1] * J[0][1]) / det;
    double db = -(J[0][0] * F[1] - J[1][0] * F[0]) / det;
    // Damping: halve the step until the residual decreases.
    double step = 1.0;
    bool moved = false;
    for (int h = 0; h < 40; ++h) {
      const double an = a + step * da, bn = b + step * db;
      if (bn - an > 1e-8 && std::abs(an) <= box && std::abs(bn) <= box) {
        double Fn[2], Jn[2][2];
        sys.eval(an, bn, Fn, Jn);
        if (std::abs(Fn[0]) + std::abs(Fn[1]) < res) {
          a = an;
          b = bn;
          moved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!moved) return false;
  }
  return false;
}

} // namespace

double EquilibriumMeasure::density(double lambda) const {
  if (lambda <= a || lambda >= b) return 0.0;
  const double t = (lambda - center()) / half();
  const double s2 = 1.0 - t * t;
  if (s2 <= 0.0) return 0.0;
  return std::sqrt(s2) * cheb::eval_u_series(u_coeffs, t) / half();
}

double EquilibriumMeasure::cdf(double lambda) const {
  if (lambda <= a) return 0.0;
  if (lambda >= b) return 1.0;
  const double t = (lambda - center()) / half();
  const double theta = std::acos(std::clamp(t, -1.0, 1.0));
  double s = 0.0;
  for (std::size_t k = 0; k < u_coeffs.size(); ++k) {
    double G;
    if (k == 0) {
      G = 0.5 * (pi - theta) + 0.25 * std::sin(2.0 * theta);
    } else {
      const double kk = static_cast<double>(k);
      G = 0.5 * (std::sin((kk + 2.0) * theta) / (kk + 2.0) - std::sin(kk * theta) / kk);
    }
    s += u_coeffs[k] * G;
  }
  return s;
}

double EquilibriumMeasure::log_potential(double lambda) const {
  const double r = half();
  const double s = (lambda - center()) / r;
  double acc = 0.0;
  if (std::abs(s) <= 1.0) {
    // int log|s-t| sqrt(1-t^2) U_k(t) dt =
    //   -(pi/2) log2 [k=0] - (pi/2) T_k(s)/k [k>=1] + (pi/2) T_{k+2}(s)/(k+2)
    const double theta = std::acos(std::clamp(s, -1.0, 1.0));
    for (std::size_t k = 0; k < u_coeffs.size(); ++k) {
      const double kk = static_cast<double>(k);
      double I = 0.5 * pi * std::cos((kk + 2.0) * theta) / (kk + 2.0);
      I += (k == 0) ? -0.5 * pi * std::log(2.0) : -0.5 * pi * std::cos(kk * theta) / kk;
      acc += u_coeffs[k] * I;
    }
  } else {
    // Outside the cut: expand in the reciprocal Joukowski variable
    // wv = s + sign(s) sqrt(s^2-1), |wv| > 1.
    const double wv = s + (s > 0.0 ? 1.0 : -1.0) * std::sqrt(s * s - 1.0);
    const double iw = 1.0 / wv;
    double pw = iw; // wv^{-k}, starting at k = 1... adjusted in the loop
    for (std::size_t k = 0; k < u_coeffs.size(); ++k) {
      const double kk = static_cast<double>(k);
      // wv^{-k} for current k: maintain pw = wv^{-(k)} with pw=1 at k=0.
      const double wmk = (k == 0) ? 1.0 : pw;
      const double wmk2 = wmk * iw * iw;
      double I = 0.5 * pi * wmk2 / (kk + 2.0);
      I += (k == 0) ? 0.5 * pi * std::log(std::abs(wv) / 2.0) : -0.5 * pi * wmk / kk;
      acc += u_coeffs[k] * I;
      if (k > 0) pw *= iw;
    }
  }
  return -std::log(r) - acc;
}

double EquilibriumMeasure::integrate(const std::function<double(double)>& f,
                                     std::size_t order) const {
  const std::size_t M = order > 0 ? order : 2 * u_coeffs.size() + 64;
  const double c = center(), r = half();
  double s = 0.0;
  for (std::size_t j = 1; j <= M; ++j) {
    const double th = pi * static_cast<double>(j) / (static_cast<double>(M) + 1.0);
    const double t = std::cos(th);
    const double w = pi / (static_cast<double>(M) + 1.0) * std::sin(th) * std::sin(th);
    s += w * f(c + r * t) * cheb::eval_u_series(u_coeffs, t);
  }
  return s;
}

EquilibriumMeasure solve_equilibrium(const Potential& p, std::size_t grid_order) {
  require(grid_order >= 8 && grid_order <= 4096, errc::invalid_argument,
          "solve_equilibrium: grid_order out of range [8, 4096]");
  const double box = 10.0 * p.clip_radius();
  const EndpointSystem sys(p, std::max<std::size_t>(2 * grid_order, 256));

  // Locate the potential minimum as a bracket seed, then try a few widths.
  const auto audit = p.audit_grid();
  double xmin = 0.0, vmin = std::numeric_limits<double>::infinity();
  for (double x : audit) {
    const double v = p.eval(x, 0);
    if (v < vmin) {
      vmin = v;
      xmin = x;
    }
  }
  double a = 0.0, b = 0.0;
  bool ok = false;
  for (double w : {1.0, 0.25, 3.0}) {
    a = xmin - w;
    b = xmin + w;
    if (newton_endpoints(sys, a, b, box)) {
      ok = true;
      break;
    }
  }
  require(ok, errc::multi_cut_unsupported,
          "equilibrium endpoint search failed to converge (support may not be one-cut)");

  EquilibriumMeasure N;
  N.a = a;
  N.b = b;
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);

  // Chebyshev coefficients of W(s) = V'(c + r s); the density coefficients
  // follow from the finite-Hilbert-transform identity
  // p.v. int sqrt(1-t^2) U_k(t)/(s-t) dt = pi T_{k+1}(s).
  const std::size_t m = grid_order;
  std::vector<double> wvals(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    const double t = std::cos(pi * static_cast<double>(j) / static_cast<double>(m));
    wvals[j] = p.eval(c + r * t, 1);
  }
  const std::vector<double> w = cheb::coeffs_from_lobatto(wvals);
  N.u_coeffs.resize(m);
  for (std::size_t k = 0; k + 1 <= m; ++k) N.u_coeffs[k] = r * w[k + 1] / (2.0 * pi);

  // Positivity probe on a fine grid (negative density means the one-cut
  // ansatz is wrong for this potential).
  double hmax = 0.0, hmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= 4 * m; ++j) {
    const double t = std::cos(pi * static_cast<double>(j) / static_cast<double>(4 * m));
    const double sig = std::sqrt(std::max(0.0, 1.0 - t * t)) * cheb::eval_u_series(N.u_coeffs, t);
    hmax = std::max(hmax, sig);
    hmin = std::min(hmin, sig);
  }
  require(hmin >= -1e-10 * std::max(1.0, hmax), errc::multi_cut_unsupported,
          "equilibrium density is negative (support is not one-cut)");

  const double mass = N.integrate([](double) { return 1.0; });
  require(std::abs(mass - 1.0) < 1e-8, errc::resolution,
          "equilibrium density failed to normalize");

  N.grid = quad::ChebGrid(m, a, b);
  N.grid_density.resize(m + 1);
  for (std::size_t j = 0; j <= m; ++j) N.grid_density[j] = N.density(N.grid.node(j));

  N.u_star = p.eval(c, 0) + 2.0 * N.log_potential(c);
  return N;
}

double effective_potential(const Potential& p, const EquilibriumMeasure& N, double lambda) {
  return p.eval(lambda, 0) + 2.0 * N.log_potential(lambda);
}

double energy(const Potential& p, const EquilibriumMeasure& N) {
  const double v = N.integrate([&](double x) { return p.eval(x, 0); });
  const double l = N.integrate([&](double x) { return N.log_potential(x); });
  return v + l;
}

double energy(const Potential& p, const SignedMeasure& m) {
  if (m.empty()) return 0.0;
  return m.integrate([&](double x) { return p.eval(x, 0); }) + log_energy_bilinear(m, m);
}

double log_energy_bilinear(const EquilibriumMeasure& N, const SignedMeasure& m) {
  return m.integrate([&](double x) { return N.log_potential(x); });
}

} // namespace mml
