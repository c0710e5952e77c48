#include "doctest.h"
#include "helpers.hpp"
#include "mml/error.hpp"
#include "mml/kernel.hpp"
#include "mml/loggas.hpp"
#include "mml/gap.hpp"
#include "mml/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

using namespace mml;
using testutil::adiff;
using testutil::thrown_code;

namespace {

// node-based map: references stay valid while later fields are added
const KernelField& field(PotentialKind kind, std::size_t n) {
  static std::map<std::pair<PotentialKind, std::size_t>, KernelField> cache;
  const auto key = std::make_pair(kind, n);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const Potential p = (kind == PotentialKind::gaussian)
                            ? Potential::gaussian()
                            : Potential::quartic(1.0, 0.0);
    it = cache.emplace(key, KernelField(p, n)).first;
  }
  return it->second;
}

quad::Rule domain_rule(const KernelField& f, std::size_t panels = 32,
                       std::size_t order = 24) {
  const auto [lo, hi] = f.domain();
  return quad::composite(panels, order, lo, hi);
}

} // namespace

TEST_SUITE("kernel") {

TEST_CASE("kernel is symmetric") {
  auto rng = testutil::counter(55);
  for (auto kind : {PotentialKind::gaussian, PotentialKind::quartic}) {
    const auto& f = field(kind, 16);
    for (int t = 0; t < 30; ++t) {
      const double a = 4.0 * (rng.next_uniform() - 0.5);
      const double b = 4.0 * (rng.next_uniform() - 0.5);
      CHECK(adiff(f.kernel(a, b), f.kernel(b, a)) <= 1e-9);
    }
  }
}

TEST_CASE("diagonal equals n times the density") {
  const auto& f = field(PotentialKind::gaussian, 16);
  for (double lam : {-1.2, 0.0, 0.4, 1.9})
    CHECK(adiff(f.kernel(lam, lam), 16.0 * f.density(lam)) <= 1e-12);
  const auto& f2 = field(PotentialKind::gaussian, 2);
  CHECK(adiff(f2.kernel(0.0, 0.0), 1.0 / std::sqrt(std::numbers::pi)) <= 1e-10);
}

TEST_CASE("gram matrices are positive semidefinite") {
  auto rng = testutil::counter(56);
  const auto& f = field(PotentialKind::quartic, 16);
  for (int t = 0; t < 20; ++t) {
    const int l = 2 + int(rng.next_u64() % 7); // up to 8 points
    Eigen::MatrixXd G(l, l);
    std::vector<double> pts(l);
    for (int i = 0; i < l; ++i) pts[i] = 3.0 * (rng.next_uniform() - 0.5);
    for (int i = 0; i < l; ++i)
      for (int j = 0; j <= i; ++j)
        G(i, j) = G(j, i) = f.kernel(pts[i], pts[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
  }
}

TEST_CASE("schwarz bound on kernel values") {
  auto rng = testutil::counter(57);
  for (auto kind : {PotentialKind::gaussian, PotentialKind::quartic}) {
    const auto& f = field(kind, 32);
    for (int t = 0; t < 50; ++t) {
      const double a = 4.0 * (rng.next_uniform() - 0.5);
      const double b = 4.0 * (rng.next_uniform() - 0.5);
      const double k = f.kernel(a, b);
      CHECK(k * k <= f.kernel(a, a) * f.kernel(b, b) + 1e-9);
    }
  }
}

TEST_CASE("quotient and direct-sum evaluation paths agree") {
  const auto& f = field(PotentialKind::gaussian, 16);
  auto direct_sum = [&](double lam, double mu) {
    const auto pl = f.psi().eval_psi(lam, 15);
    const auto pm = f.psi().eval_psi(mu, 15);
    double s = 0.0;
    for (std::size_t k = 0; k < 16; ++k) s += pl[k] * pm[k];
    return s;
  };
  CHECK(adiff(f.kernel(0.3, 0.31), direct_sum(0.3, 0.31)) <= 1e-7);
  // sweep a band of separations straddling the internal path switch
  const auto [lo, hi] = f.domain();
  const double dsw = 1e-4 * (hi - lo);
  for (double sep : {0.5 * dsw, 0.9 * dsw, 1.1 * dsw, 2.0 * dsw, 10.0 * dsw}) {
    const double v = f.kernel(0.2, 0.2 + sep);
    CHECK(adiff(v, direct_sum(0.2, 0.2 + sep)) <= 1e-7);
  }
}

TEST_CASE("density is a probability density approaching the semicircle") {
  const auto& f64 = field(PotentialKind::gaussian, 64);
  CHECK(adiff(f64.density(0.0), 1.0 / std::numbers::pi) <= 0.02);
  for (auto kind : {PotentialKind::gaussian, PotentialKind::quartic}) {
    const auto& f = field(kind, 16);
    const auto rule = domain_rule(f);
    CHECK(adiff(rule.integrate([&](double x) { return f.density(x); }), 1.0) <= 1e-7);
    for (double lam : {-2.5, -1.0, 0.0, 0.9, 2.2})
      CHECK(f.density(lam) >= 0.0);
  }
}

TEST_CASE("density outside the support decays exponentially in n") {
  const double r8 = field(PotentialKind::gaussian, 8).density(3.0);
  const double r16 = field(PotentialKind::gaussian, 16).density(3.0);
  const double r32 = field(PotentialKind::gaussian, 32).density(3.0);
  CHECK(std::log(r16) <= -2.0);
  CHECK(r16 < r8);
  CHECK(r32 < r16);
}

TEST_CASE("one-point marginal is the density and repeated points vanish") {
  const auto& f = field(PotentialKind::gaussian, 8);
  for (double lam : {-0.7, 0.0, 1.3})
    CHECK(adiff(f.marginal({lam}), f.density(lam)) <= 1e-12);
  CHECK(adiff(f.marginal({0.4, 0.4}), 0.0) <= 1e-10);
  CHECK(thrown_code([&] { f.marginal(std::vector<double>(9, 0.0)); }) ==
        errc::invalid_argument);
  CHECK(thrown_code([&] { f.marginal({}); }) == errc::invalid_argument);
}

TEST_CASE("marginals are nonnegative on random point sets") {
  auto rng = testutil::counter(58);
  const auto& f = field(PotentialKind::quartic, 8);
  for (int t = 0; t < 40; ++t) {
    const int l = 2 + int(rng.next_u64() % 3);
    std::vector<double> pts(l);
    for (auto& x : pts) x = 3.0 * (rng.next_uniform() - 0.5);
    CHECK(f.marginal(pts) >= -1e-10);
  }
}

TEST_CASE("pair marginal integrates back to the one-point density") {
  const auto& f = field(PotentialKind::gaussian, 8);
  const auto rule = domain_rule(f);
  for (double lam : {0.0, 0.7}) {
    const double got =
        rule.integrate([&](double mu) { return f.marginal({lam, mu}); });
    CHECK(adiff(got, f.density(lam)) <= 1e-6);
  }
}

TEST_CASE("pair marginal matches an importance-sampled integration") {
  const std::size_t n = 8;
  const double x1 = 0.0, x2 = 0.5;
  const auto p = Potential::gaussian();
  const auto& f = field(PotentialKind::gaussian, n);
  const auto table = build_recurrence(p, n);
  double log_q = std::lgamma(double(n) + 1.0);
  for (std::size_t l = 0; l < n; ++l) log_q -= 2.0 * table.log_gamma[l];
  const double sigma = 0.8;
  const double log_pref = -double(n) * (p.eval(x1, 0) + p.eval(x2, 0)) +
                          2.0 * std::log(std::abs(x1 - x2)) - log_q;
  const int m = 1000000;
  auto rng = testutil::counter(0x5EED, 0);
  std::vector<double> logw(m);
  double shift = -1e300;
  std::vector<double> y(n - 2);
  for (int t = 0; t < m; ++t) {
    for (auto& v : y) v = sigma * rng.next_normal();
    double lw = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      lw += y[i] * y[i] / (2.0 * sigma * sigma) +
            std::log(sigma * std::sqrt(2.0 * std::numbers::pi)) -
            double(n) * p.eval(y[i], 0) + 2.0 * std::log(std::abs(y[i] - x1)) +
            2.0 * std::log(std::abs(y[i] - x2));
      for (std::size_t j = 0; j < i; ++j)
        lw += 2.0 * std::log(std::abs(y[i] - y[j]));
    }
    logw[t] = lw;
    shift = std::max(shift, lw);
  }
  double s1 = 0.0, s2 = 0.0;
  for (double lw : logw) {
    const double w = std::exp(lw - shift);
    s1 += w;
    s2 += w * w;
  }
  const double mean = s1 / m;
  const double sd = std::sqrt(std::max(0.0, s2 / m - mean * mean) / (m - 1.0));
  const double scale = std::exp(log_pref + shift);
  const double estimate = scale * mean;
  const double se = scale * sd * std::sqrt(double(m) / (m - 1.0));
  const double exact = f.marginal({x1, x2});
  CHECK(se > 0.0);
  CHECK(adiff(exact, estimate) <= 3.0 * se);
}

TEST_CASE("rescaled kernel diagonal identity and symmetry") {
  const auto& f = field(PotentialKind::gaussian, 64);
  const double lam0 = 0.1;
  CHECK(adiff(f.rescaled(lam0, 0.0, 0.0), f.density(lam0)) <= 1e-15);
  for (double x : {-2.0, 0.5, 1.75})
    CHECK(adiff(f.rescaled(lam0, x, x), f.density(lam0 + x / 64.0)) <= 1e-15);
  CHECK(adiff(f.rescaled(lam0, 0.7, -1.1), f.rescaled(lam0, -1.1, 0.7)) <= 1e-12);
}

TEST_CASE("rescaled kernel approaches the sine kernel in the bulk") {
  const auto& f = field(PotentialKind::gaussian, 64);
  const double rho0 = f.density(0.0);
  double worst = 0.0;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j) {
      const double x = double(i), yv = double(j);
      const double got = f.rescaled(0.0, x, yv) / rho0;
      const double want = sine_kernel((x - yv) * rho0);
      worst = std::max(worst, std::abs(got - want));
    }
  CHECK(worst <= 0.05);
}

TEST_CASE("rescaled kernel becomes translation invariant as n grows") {
  auto spread = [](const KernelField& f) {
    double worst = 0.0;
    for (double x = -2.0; x <= 2.0; x += 0.5)
      for (double yv = -2.0; yv <= 2.0; yv += 0.5)
        worst = std::max(worst,
                         std::abs(f.rescaled(0.0, x, yv) - f.rescaled(0.0, 0.0, yv - x)));
    return worst;
  };
  CHECK(spread(field(PotentialKind::gaussian, 64)) <
        spread(field(PotentialKind::gaussian, 16)));
}

TEST_CASE("exact kernel identities hold at quadrature accuracy") {
  const auto& f = field(PotentialKind::gaussian, 16);
  const auto rep = f.cd_identities();
  CHECK(adiff(rep.pair_moment_target, 2.0) <= 1e-10); // 2 J_{n-1}^2, gaussian
  CHECK(adiff(rep.pair_moment, 2.0) <= 1e-5);
  CHECK(rep.residual_a <= 1e-5);
  CHECK(rep.residual_b <= 1e-5);
  CHECK(rep.residual_c <= 1e-5);
  CHECK(rep.probe_points.size() >= 16);
  const auto repq = field(PotentialKind::quartic, 8).cd_identities();
  CHECK(repq.residual_a <= 1e-5);
  CHECK(repq.residual_b <= 1e-5);
  CHECK(repq.residual_c <= 1e-5);
}

TEST_CASE("parity zeroes both sides of the first-moment identity at the center") {
  const auto& f = field(PotentialKind::gaussian, 16);
  const auto rule = domain_rule(f, 48, 24);
  const double lhs =
      rule.integrate([&](double mu) { return (0.0 - mu) * std::pow(f.kernel(0.0, mu), 2); });
  CHECK(adiff(lhs, 0.0) <= 1e-9);
  const auto psi = f.psi().eval_psi(0.0, 16);
  CHECK(adiff(f.j_last() * psi[15] * psi[16], 0.0) <= 1e-12);
  // derivative identity: both sides vanish at the symmetry point too
  const double rhs_c = rule.integrate(
      [&](double mu) { return (1.0 * mu - 0.0) * std::pow(f.kernel(0.0, mu), 2); });
  const double h = 1e-4;
  const double fd = (f.density(h) - f.density(-h)) / (2.0 * h);
  CHECK(adiff(rhs_c, 0.0) <= 1e-9);
  CHECK(adiff(fd, 0.0) <= 1e-7);
}

TEST_CASE("variance of a constant statistic vanishes") {
  const auto& f = field(PotentialKind::gaussian, 8);
  CHECK(adiff(f.variance_linear_stat([](double) { return 1.0; }), 0.0) <= 1e-10);
}

TEST_CASE("variance of exactly solvable statistics") {
  const auto& f = field(PotentialKind::gaussian, 8);
  CHECK(adiff(f.variance_linear_stat([](double x) { return x; }), 1.0 / 64.0) <= 1e-9);
  CHECK(adiff(f.variance_linear_stat([](double x) { return x * x; }), 2.0 / 64.0) <= 1e-9);
}

TEST_CASE("variance of smooth statistics decreases with n") {
  auto id = [](double x) { return x; };
  CHECK(field(PotentialKind::gaussian, 64).variance_linear_stat(id) <
        field(PotentialKind::gaussian, 32).variance_linear_stat(id));
}

TEST_CASE("determinantal variance matches the metropolis sampler") {
  const auto& f = field(PotentialKind::gaussian, 8);
  const double exact = f.variance_linear_stat([](double x) { return x * x; });
  GasConfig cfg;
  cfg.n = 8;
  cfg.beta = 2.0;
  cfg.potential = Potential::gaussian();
  cfg.seed = 1234;
  const auto ens = sample(cfg, 4000);
  const auto& cs = ens.configurations;
  std::vector<double> stat(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    double s = 0.0;
    for (double lam : cs[i]) s += lam * lam;
    stat[i] = s / 8.0;
  }
  // batch-means estimate of Var and its standard error
  const int nb = 20;
  const std::size_t bs = stat.size() / nb;
  std::vector<double> bvar(nb);
  for (int b = 0; b < nb; ++b) {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = b * bs; i < (b + 1) * bs; ++i) {
      m1 += stat[i];
      m2 += stat[i] * stat[i];
    }
    m1 /= double(bs);
    bvar[b] = m2 / double(bs) - m1 * m1;
  }
  double vm = 0.0, vs = 0.0;
  for (double v : bvar) vm += v;
  vm /= nb;
  for (double v : bvar) vs += (v - vm) * (v - vm);
  const double se = std::sqrt(vs / (nb - 1.0) / nb);
  CHECK(adiff(exact, vm) <= 3.0 * se);
}

TEST_CASE("kernel reproduces itself under composition") {
  const auto& f = field(PotentialKind::gaussian, 16);
  const auto [lo, hi] = f.domain();
  const auto rule = quad::composite(16, 128, lo, hi);
  const auto [blo, bhi] = f.bulk_window();
  auto rng = testutil::counter(314, 0);
  for (int t = 0; t < 20; ++t) {
    const double a = blo + (bhi - blo) * rng.next_uniform();
    const double b = blo + (bhi - blo) * rng.next_uniform();
    const double got =
        rule.integrate([&](double nu) { return f.kernel(a, nu) * f.kernel(nu, b); });
    CHECK(adiff(got, f.kernel(a, b)) <= 1e-6);
  }
}

TEST_CASE("determinants obey the diagonal product bound") {
  auto rng = testutil::counter(2718, 0);
  const auto& f = field(PotentialKind::gaussian, 16);
  for (int t = 0; t < 100; ++t) {
    const int l = 2 + int(rng.next_u64() % 5); // up to 6 points
    Eigen::MatrixXd G(l, l);
    std::vector<double> pts(l);
    for (auto& x : pts) x = 4.0 * (rng.next_uniform() - 0.5);
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j) G(i, j) = f.kernel(pts[i], pts[j]);
    double diag_prod = 1.0;
    for (int i = 0; i < l; ++i) diag_prod *= G(i, i);
    CHECK(G.determinant() <= diag_prod + 1e-9);
  }
}

TEST_CASE("bulk window sits strictly inside the domain") {
  const auto& f = field(PotentialKind::gaussian, 16);
  const auto [lo, hi] = f.domain();
  const auto [blo, bhi] = f.bulk_window();
  CHECK(blo > lo);
  CHECK(bhi < hi);
  CHECK(blo < bhi);
  CHECK(f.density(0.5 * (blo + bhi)) > 0.1);
}

} // TEST_SUITE
