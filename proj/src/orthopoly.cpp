#include "mml/orthopoly.hpp"

#include "mml/error.hpp"
#include "mml/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mml {

namespace {

// Discrete measure carrying the weight exp(-n V) on composite Gauss-Legendre
// nodes.  Panel count scales with n so that both the weight's exponential
// variation and the polynomial oscillation (local wavelength ~ 1/n) stay
// resolved by an order-24 panel rule.
struct DiscreteWeight {
  std::vector<double> x, w;

  DiscreteWeight(const Potential& p, std::size_t n, std::size_t panels, std::size_t order) {
    const auto [lo, hi] = weight_domain(p, n);
    const quad::Rule rule = quad::composite(panels, order, lo, hi);
    x = rule.nodes;
    w.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      w[i] = rule.weights[i] * std::exp(-static_cast<double>(n) * p.eval(x[i], 0));
  }

  double dot(const std::vector<double>& u, const std::vector<double>& v) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * u[i] * v[i];
    return s;
  }
};

} // namespace

std::pair<double, double> weight_domain(const Potential& p, std::size_t n) {
  const auto grid = p.audit_grid();
  double vmin = std::numeric_limits<double>::infinity();
  for (double t : grid) vmin = std::min(vmin, p.eval(t, 0));
  // Keep nodes while n (V - Vmin) <= 800: beyond that the weight is zero to
  // double precision even against polynomial growth of the integrands.
  const double cap = vmin + 800.0 / static_cast<double>(n);
  const double box = p.clip_radius() + 2.0;
  double lo = box, hi = -box;
  for (double t : grid) {
    if (p.eval(t, 0) <= cap) {
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  lo = std::max(lo, -box);
  hi = std::min(hi, box);
  require(lo < hi, errc::resolution, "weight_domain: weight region is empty");
  return {lo, hi};
}

RecurrenceTable build_recurrence(const Potential& p, std::size_t n) {
  require(n >= 1 && n <= 256, errc::invalid_argument,
          "build_recurrence: n must be in 1..256");
  const std::size_t panels = std::max<std::size_t>(64, 2 * n);
  const DiscreteWeight dm(p, n, panels, 24);
  const std::size_t m = dm.x.size();

  RecurrenceTable t;
  t.n = n;
  t.off_diag.resize(n);
  t.diag.resize(n);
  t.log_gamma.resize(n + 1);

  double m0 = 0.0;
  for (double wi : dm.w) m0 += wi;
  require(m0 > 0.0 && std::isfinite(m0), errc::resolution,
          "build_recurrence: weight has zero mass on the quadrature grid");
  t.log_gamma[0] = -0.5 * std::log(m0);

  // Lanczos vectors q_0 .. q_n, orthonormal in the discrete measure; kept
  // for full reorthogonalization (two modified-Gram-Schmidt passes).
  std::vector<std::vector<double>> q;
  q.reserve(n + 1);
  q.emplace_back(m, 1.0 / std::sqrt(m0));
  std::vector<double> r(m);

  for (std::size_t k = 0; k < n; ++k) {
    const auto& qk = q[k];
    double alpha = 0.0;
    for (std::size_t i = 0; i < m; ++i) alpha += dm.w[i] * dm.x[i] * qk[i] * qk[i];
    t.diag[k] = alpha;

    const double beta_prev = k > 0 ? t.off_diag[k - 1] : 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      r[i] = (dm.x[i] - alpha) * qk[i];
      if (k > 0) r[i] -= beta_prev * q[k - 1][i];
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qj : q) {
        const double c = dm.dot(r, qj);
        for (std::size_t i = 0; i < m; ++i) r[i] -= c * qj[i];
      }
    }
    const double beta = std::sqrt(dm.dot(r, r));
    require(std::isfinite(beta) && beta > 1e-13, errc::resolution,
            "build_recurrence: norm collapse at k=" + std::to_string(k) +
                " (weight too concentrated for the quadrature grid)");
    t.off_diag[k] = beta;
    t.log_gamma[k + 1] = t.log_gamma[k] - std::log(beta);
    auto& qn = q.emplace_back(m);
    for (std::size_t i = 0; i < m; ++i) qn[i] = r[i] / beta;
  }
  return t;
}

PsiEvaluator::PsiEvaluator(Potential p, RecurrenceTable table)
    : potential_(std::move(p)), table_(std::move(table)) {
  require(table_.off_diag.size() == table_.n && table_.diag.size() == table_.n &&
              table_.log_gamma.size() == table_.n + 1,
          errc::invalid_argument, "PsiEvaluator: inconsistent recurrence table");
}

std::vector<double> PsiEvaluator::eval_psi(double lambda, std::size_t k_max) const {
  require(k_max <= table_.n, errc::invalid_argument,
          "eval_psi: k_max exceeds the built recurrence length");
  const double nn = static_cast<double>(table_.n);
  // psi_k = v_k * exp(scale); v carries the mantissa, scale the log factor.
  double scale = table_.log_gamma[0] - 0.5 * nn * potential_.eval(lambda, 0);
  double v_prev = 0.0, v_cur = 1.0;

  std::vector<double> out(k_max + 1);
  out[0] = v_cur * std::exp(scale);
  for (std::size_t k = 0; k < k_max; ++k) {
    const double v_next =
        ((lambda - table_.diag[k]) * v_cur - (k > 0 ? table_.off_diag[k - 1] : 0.0) * v_prev) /
        table_.off_diag[k];
    v_prev = v_cur;
    v_cur = v_next;
    const double mag = std::max(std::abs(v_prev), std::abs(v_cur));
    if (mag > 1e150 || (mag < 1e-150 && mag > 0.0)) {
      v_prev /= mag;
      v_cur /= mag;
      scale += std::log(mag);
    }
    out[k + 1] = v_cur * std::exp(scale);
  }
  return out;
}

double orthonormality_defect(const PsiEvaluator& e) {
  const Potential& p = e.potential();
  const std::size_t n = e.n();
  // Independent discretization: different panel count and order than the
  // builder's, so agreement is evidence rather than tautology.
  const std::size_t panels = std::max<std::size_t>(93, 2 * n + 29);
  const auto [lo, hi] = weight_domain(p, n);
  const quad::Rule rule = quad::composite(panels, 20, lo, hi);

  std::vector<double> gram(n * n, 0.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const auto psi = e.eval_psi(rule.nodes[i], n - 1);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l <= k; ++l)
        gram[k * n + l] += rule.weights[i] * psi[k] * psi[l];
  }
  double defect = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l <= k; ++l)
      defect = std::max(defect, std::abs(gram[k * n + l] - (k == l ? 1.0 : 0.0)));
  return defect;
}

double free_energy(const RecurrenceTable& t) {
  const double nn = static_cast<double>(t.n);
  double sum_lg = 0.0;
  for (std::size_t l = 0; l < t.n; ++l) sum_lg += t.log_gamma[l];
  return -(std::lgamma(nn + 1.0) - 2.0 * sum_lg) / (nn * nn);
}

double free_energy(const Potential& p, std::size_t n) {
  return free_energy(build_recurrence(p, n));
}

} // namespace mml
