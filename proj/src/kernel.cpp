#include "mml/kernel.hpp"

#include "mml/error.hpp"
#include "mml/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace mml {

namespace {

// Quadrature for kernel integrals: panel density follows the oscillation
// scale (~1/n wavelength) exactly as in the recurrence builder.
quad::Rule kernel_rule(double lo, double hi, std::size_t n, std::size_t order) {
  return quad::composite(std::max<std::size_t>(64, 2 * n), order, lo, hi);
}

// psi_0..psi_n at every node, as rows.
struct PsiCache {
  std::vector<double> nodes, weights;
  std::vector<std::vector<double>> psi;

  PsiCache(const PsiEvaluator& e, const quad::Rule& rule) : nodes(rule.nodes), weights(rule.weights) {
    psi.reserve(nodes.size());
    for (double x : nodes) psi.push_back(e.eval_psi(x, e.n()));
  }
};

} // namespace

KernelField::KernelField(const Potential& p, std::size_t n)
    : KernelField(PsiEvaluator(p, build_recurrence(p, n))) {}

KernelField::KernelField(PsiEvaluator psi) : psi_(std::move(psi)) {
  require(psi_.n() >= 1, errc::invalid_argument, "KernelField: n must be >= 1");
  j_last_ = psi_.table().off_diag.back();
  std::tie(lo_, hi_) = weight_domain(psi_.potential(), psi_.n());
  delta_switch_ = 1e-4 * (hi_ - lo_);
}

double KernelField::kernel(double lambda, double mu) const {
  const std::size_t n = psi_.n();
  if (std::abs(lambda - mu) > delta_switch_) {
    const auto pl = psi_.eval_psi(lambda, n);
    const auto pm = psi_.eval_psi(mu, n);
    return j_last_ * (pl[n] * pm[n - 1] - pl[n - 1] * pm[n]) / (lambda - mu);
  }
  // Near the diagonal: direct sum over psi pairs evaluated at both points.
  const auto pl = psi_.eval_psi(lambda, n - 1);
  const auto pm = psi_.eval_psi(mu, n - 1);
  double s = 0.0;
  for (std::size_t l = 0; l < n; ++l) s += pl[l] * pm[l];
  return s;
}

double KernelField::density(double lambda) const {
  const auto p = psi_.eval_psi(lambda, psi_.n() - 1);
  double s = 0.0;
  for (std::size_t l = 0; l < psi_.n(); ++l) s += p[l] * p[l];
  return s / static_cast<double>(psi_.n());
}

double KernelField::marginal(const std::vector<double>& points) const {
  const std::size_t l = points.size();
  const std::size_t n = psi_.n();
  require(l >= 1 && l <= n, errc::invalid_argument,
          "marginal: need 1 <= #points <= n");
  Eigen::MatrixXd K(l, l);
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t k = 0; k <= j; ++k) {
      K(j, k) = kernel(points[j], points[k]);
      K(k, j) = K(j, k);
    }
  const double det = K.partialPivLu().determinant();
  // (n-l)!/n! in log form to survive large n.
  const double pref = std::exp(std::lgamma(static_cast<double>(n - l) + 1.0) -
                               std::lgamma(static_cast<double>(n) + 1.0));
  return pref * det;
}

double KernelField::rescaled(double lambda0, double x, double y) const {
  const double nn = static_cast<double>(psi_.n());
  if (x == y) return density(lambda0 + x / nn); // exact diagonal identity
  return kernel(lambda0 + x / nn, lambda0 + y / nn) / nn;
}

std::pair<double, double> KernelField::bulk_window() const {
  const std::size_t probes = 257;
  std::vector<double> rho(probes);
  double peak = 0.0;
  for (std::size_t i = 0; i < probes; ++i) {
    const double x = lo_ + (hi_ - lo_) * static_cast<double>(i) / (probes - 1.0);
    rho[i] = density(x);
    peak = std::max(peak, rho[i]);
  }
  std::size_t first = 0, last = probes - 1;
  while (first < probes && rho[first] < 0.2 * peak) ++first;
  while (last > first && rho[last] < 0.2 * peak) --last;
  double a = lo_ + (hi_ - lo_) * static_cast<double>(first) / (probes - 1.0);
  double b = lo_ + (hi_ - lo_) * static_cast<double>(last) / (probes - 1.0);
  const double trim = 0.2 * (b - a);
  return {a + trim, b - trim};
}

IdentityReport KernelField::cd_identities() const {
  const std::size_t n = psi_.n();
  const PsiCache c(psi_, kernel_rule(lo_, hi_, n, 12));
  const std::size_t m = c.nodes.size();

  // Kernel matrix on the quadrature nodes from the cached psi values:
  // CD quotient off-diagonal, direct sum when nodes nearly coincide.
  std::vector<std::vector<double>> K(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double d = c.nodes[i] - c.nodes[j];
      double v;
      if (std::abs(d) > delta_switch_) {
        v = j_last_ * (c.psi[i][n] * c.psi[j][n - 1] - c.psi[i][n - 1] * c.psi[j][n]) / d;
      } else {
        v = 0.0;
        for (std::size_t l = 0; l < n; ++l) v += c.psi[i][l] * c.psi[j][l];
      }
      K[i][j] = K[j][i] = v;
    }
  }

  IdentityReport rep;
  // (a) iint (lambda-mu)^2 K_n^2 = 2 J_{n-1}^2.
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double d = c.nodes[i] - c.nodes[j];
      row += c.weights[j] * d * d * K[i][j] * K[i][j];
    }
    acc += c.weights[i] * row;
  }
  rep.pair_moment = acc;
  rep.pair_moment_target = 2.0 * j_last_ * j_last_;
  rep.residual_a = std::abs(rep.pair_moment - rep.pair_moment_target);

  // Probe points for the pointwise identities: 16 across the bulk.
  const auto [ba, bb] = bulk_window();
  rep.probe_points.resize(16);
  for (std::size_t i = 0; i < 16; ++i)
    rep.probe_points[i] = ba + (bb - ba) * (static_cast<double>(i) + 0.5) / 16.0;

  const Potential& pot = psi_.potential();
  const quad::Rule rule = kernel_rule(lo_, hi_, n, 12);
  for (double lambda : rep.probe_points) {
    const auto pl = psi_.eval_psi(lambda, n);
    // (b) int (lambda-mu) K_n^2(lambda,mu) dmu = J psi_{n-1}(lambda) psi_n(lambda)
    // (c) rho_n'(lambda) = int (V'(mu)-V'(lambda)) K_n^2(lambda,mu) dmu
    double ib = 0.0, ic = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double mu = rule.nodes[j];
      const double kv = kernel(lambda, mu);
      ib += rule.weights[j] * (lambda - mu) * kv * kv;
      ic += rule.weights[j] * (pot.eval(mu, 1) - pot.eval(lambda, 1)) * kv * kv;
    }
    rep.residual_b = std::max(rep.residual_b, std::abs(ib - j_last_ * pl[n - 1] * pl[n]));

    // rho_n' by 5-point central differences, step 1e-4.
    const double h = 1e-4;
    const double drho = (-density(lambda + 2 * h) + 8 * density(lambda + h) -
                         8 * density(lambda - h) + density(lambda - 2 * h)) /
                        (12 * h);
    rep.residual_c = std::max(rep.residual_c, std::abs(drho - ic));
  }
  return rep;
}

double KernelField::variance_linear_stat(const std::function<double(double)>& phi) const {
  const std::size_t n = psi_.n();
  const PsiCache c(psi_, kernel_rule(lo_, hi_, n, 12));
  const std::size_t m = c.nodes.size();
  std::vector<double> ph(m);
  for (std::size_t i = 0; i < m; ++i) ph[i] = phi(c.nodes[i]);

  double diag = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double kii = 0.0;
    for (std::size_t l = 0; l < n; ++l) kii += c.psi[i][l] * c.psi[i][l];
    diag += c.weights[i] * ph[i] * ph[i] * kii;
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double d = c.nodes[i] - c.nodes[j];
      double kij;
      if (std::abs(d) > delta_switch_) {
        kij = j_last_ * (c.psi[i][n] * c.psi[j][n - 1] - c.psi[i][n - 1] * c.psi[j][n]) / d;
      } else {
        kij = 0.0;
        for (std::size_t l = 0; l < n; ++l) kij += c.psi[i][l] * c.psi[j][l];
      }
      row += c.weights[j] * ph[j] * kij * kij;
    }
    cross += c.weights[i] * ph[i] * row;
  }
  const double nn = static_cast<double>(n);
  return (diag - cross) / (nn * nn);
}

} // namespace mml
