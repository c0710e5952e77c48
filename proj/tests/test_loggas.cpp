#include "doctest.h"
#include "helpers.hpp"
#include "mml/equilibrium.hpp"
#include "mml/error.hpp"
#include "mml/kernel.hpp"
#include "mml/loggas.hpp"
#include "mml/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace mml;
using testutil::adiff;
using testutil::thrown_code;

namespace {

GasConfig gaussian_config(std::size_t n, double beta, std::uint64_t seed) {
  GasConfig cfg;
  cfg.n = n;
  cfg.beta = beta;
  cfg.potential = Potential::gaussian();
  cfg.seed = seed;
  return cfg;
}

// Batch-means estimate of the variance of a statistic series together with
// the standard error of that variance estimate (robust to autocorrelation).
struct VarEstimate {
  double var = 0.0;
  double se = 0.0;
};

VarEstimate batched_variance(const std::vector<double>& stat, int batches = 20) {
  const std::size_t bs = stat.size() / batches;
  std::vector<double> bvar(batches);
  for (int b = 0; b < batches; ++b) {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = b * bs; i < std::size_t(b + 1) * bs; ++i) {
      m1 += stat[i];
      m2 += stat[i] * stat[i];
    }
    m1 /= double(bs);
    bvar[b] = m2 / double(bs) - m1 * m1;
  }
  VarEstimate out;
  for (double v : bvar) out.var += v;
  out.var /= batches;
  double ss = 0.0;
  for (double v : bvar) ss += (v - out.var) * (v - out.var);
  out.se = std::sqrt(ss / (batches - 1.0) / batches);
  return out;
}

} // namespace

TEST_SUITE("loggas") {

TEST_CASE("hamiltonian values") {
  auto cfg1 = gaussian_config(1, 2.0, 0);
  CHECK(adiff(hamiltonian(cfg1, {0.7}), 0.5 * 0.7 * 0.7) <= 1e-14);
  auto cfg2 = gaussian_config(2, 2.0, 0);
  // V(-1) + V(1) - (2/2) log|1-(-1)| = 1 - log 2
  CHECK(adiff(hamiltonian(cfg2, {-1.0, 1.0}), 1.0 - std::log(2.0)) <= 1e-14);
  auto cfg3 = gaussian_config(3, 2.0, 0);
  CHECK(adiff(hamiltonian(cfg3, {0.2, -1.1, 0.8}),
              hamiltonian(cfg3, {0.8, 0.2, -1.1})) <= 1e-13);
}

TEST_CASE("coincident particles cost infinite energy without crashing") {
  auto cfg = gaussian_config(2, 2.0, 0);
  const double h = hamiltonian(cfg, {0.5, 0.5});
  CHECK(std::isinf(h));
  CHECK(h > 0.0);
  // a proposal onto an occupied site is always rejected
  CHECK(acceptance_probability(cfg, {0.5, -0.5}, 0, -0.5) == 0.0);
}

TEST_CASE("metropolis flows balance in both directions") {
  const std::vector<double> states = {-1.2, -0.4, 0.1, 0.9, 1.7};
  const double lam2 = 0.3;
  for (double beta : {2.0, 0.5}) {
    auto cfg = gaussian_config(2, beta, 0);
    std::vector<double> weight(states.size());
    double hmin = 1e300;
    for (std::size_t i = 0; i < states.size(); ++i)
      hmin = std::min(hmin, hamiltonian(cfg, {states[i], lam2}));
    for (std::size_t i = 0; i < states.size(); ++i) {
      const double h = hamiltonian(cfg, {states[i], lam2});
      weight[i] = std::exp(-beta * 2.0 * (h - hmin) / 2.0);
    }
    for (std::size_t a = 0; a < states.size(); ++a)
      for (std::size_t b = 0; b < states.size(); ++b) {
        if (a == b) continue;
        const double flow_ab =
            weight[a] * acceptance_probability(cfg, {states[a], lam2}, 0, states[b]);
        const double flow_ba =
            weight[b] * acceptance_probability(cfg, {states[b], lam2}, 0, states[a]);
        CHECK(adiff(flow_ab, flow_ba) <= 1e-12);
      }
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  auto cfg = gaussian_config(4, 2.0, 99);
  cfg.burn_in = 2000;
  cfg.thin = 4;
  const auto s1 = sample(cfg, 50);
  const auto s2 = sample(cfg, 50);
  REQUIRE(s1.configurations.size() == 50);
  CHECK(s1.configurations == s2.configurations);
  CHECK(s1.acceptance_rate == s2.acceptance_rate);
  cfg.seed = 100;
  const auto s3 = sample(cfg, 50);
  CHECK(s1.configurations != s3.configurations);
}

TEST_CASE("configurations come back sorted with a tuned acceptance rate") {
  auto cfg = gaussian_config(8, 2.0, 42);
  const auto s = sample(cfg, 200);
  for (const auto& conf : s.configurations) {
    REQUIRE(conf.size() == 8);
    CHECK(std::is_sorted(conf.begin(), conf.end()));
  }
  CHECK(s.acceptance_rate >= 0.1);
  CHECK(s.acceptance_rate <= 0.9);
  CHECK(s.acceptance_in_band);
  CHECK(s.tuned_scale > 0.0);
}

TEST_CASE("single-particle marginal matches the analytic law") {
  auto cfg = gaussian_config(1, 2.0, 5);
  const auto s = sample(cfg, 100000);
  std::vector<double> x;
  x.reserve(s.configurations.size());
  for (const auto& c : s.configurations) x.push_back(c[0]);
  std::sort(x.begin(), x.end());
  // With one particle there is no interaction term, so the stationary density
  // is proportional to exp(-beta n V / 2) = exp(-lambda^2 / 2): a standard
  // normal, CDF (1 + erf(x / sqrt(2))) / 2.
  double ks = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = 0.5 * (1.0 + std::erf(x[i] / std::numbers::sqrt2));
    ks = std::max(ks, std::abs(cdf - (i + 0.5) / double(x.size())));
  }
  CHECK(ks < 0.02);
}

TEST_CASE("two-particle second moment matches the exact finite-n density") {
  auto cfg = gaussian_config(2, 2.0, 17);
  const auto s = sample(cfg, 4000);
  std::vector<double> stat;
  stat.reserve(s.configurations.size());
  for (const auto& c : s.configurations)
    stat.push_back(0.5 * (c[0] * c[0] + c[1] * c[1]));
  // batch means for the standard error of the mean under autocorrelation
  const int nb = 20;
  const std::size_t bs = stat.size() / nb;
  std::vector<double> bm(nb);
  for (int b = 0; b < nb; ++b) {
    double m = 0.0;
    for (std::size_t i = b * bs; i < std::size_t(b + 1) * bs; ++i) m += stat[i];
    bm[b] = m / double(bs);
  }
  double mean = 0.0;
  for (double v : bm) mean += v;
  mean /= nb;
  double ss = 0.0;
  for (double v : bm) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / (nb - 1.0) / nb);
  CHECK(adiff(mean, 1.0) <= 3.0 * se); // int lambda^2 rho_2 = 1 exactly
}

TEST_CASE("counting-measure statistics at n=8 match the determinantal formulas") {
  const auto N = solve_equilibrium(Potential::gaussian());
  auto cfg = gaussian_config(8, 2.0, 42);
  const auto s = sample(cfg, 2000);
  const auto rep = ncm_statistics(cfg, s, N);

  const KernelField f(Potential::gaussian(), 8);
  std::vector<double> st_id, st_sq, st_bump;
  for (const auto& c : s.configurations) {
    double a = 0.0, b = 0.0, g = 0.0;
    for (double x : c) {
      a += x;
      b += x * x;
      g += std::exp(-x * x);
    }
    st_id.push_back(a / 8.0);
    st_sq.push_back(b / 8.0);
    st_bump.push_back(g / 8.0);
  }
  const auto vid = batched_variance(st_id);
  const auto vsq = batched_variance(st_sq);
  const auto vbump = batched_variance(st_bump);
  CHECK(adiff(rep.var_identity,
              f.variance_linear_stat([](double x) { return x; })) <= 3.0 * vid.se);
  CHECK(adiff(rep.var_square,
              f.variance_linear_stat([](double x) { return x * x; })) <= 3.0 * vsq.se);
  CHECK(adiff(rep.var_bump, f.variance_linear_stat([](double x) {
          return std::exp(-x * x);
        })) <= 3.0 * vbump.se);

  // histogram of all sampled eigenvalues against the exact finite-n density
  const double lo = -2.5, hi = 2.5, width = 0.5;
  const int nbins = int((hi - lo) / width);
  const int nb = 20;
  const std::size_t bs = s.configurations.size() / nb;
  std::vector<std::vector<double>> bin_rate(nbins, std::vector<double>(nb, 0.0));
  for (int b = 0; b < nb; ++b)
    for (std::size_t i = b * bs; i < std::size_t(b + 1) * bs; ++i)
      for (double x : s.configurations[i]) {
        const int k = int(std::floor((x - lo) / width));
        if (k >= 0 && k < nbins) bin_rate[k][b] += 1.0 / (8.0 * width * double(bs));
      }
  const auto rule = quad::gauss_legendre(32, 0.0, 1.0);
  for (int k = 0; k < nbins; ++k) {
    double mean = 0.0;
    for (double v : bin_rate[k]) mean += v;
    mean /= nb;
    double ss = 0.0;
    for (double v : bin_rate[k]) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / (nb - 1.0) / nb);
    const double a = lo + k * width;
    const double expected =
        rule.integrate([&](double t) { return f.density(a + t * width); });
    // 4 standard errors plus a small absolute floor for near-empty edge bins
    CHECK(adiff(mean, expected) <= 4.0 * se + 1e-3);
  }

  // tail exponents: positive, with the gaussian value checkable directly
  for (int e = 0; e < 2; ++e) {
    CHECK(rep.tail_exponent[e] > 0.0);
    CHECK(adiff(rep.predicted_tail[e], std::exp(-8.0 * rep.tail_exponent[e])) <= 1e-12);
  }
  const double eps = 0.1;
  const double d_direct =
      (effective_potential(cfg.potential, N, N.b + eps) - N.u_star) / 4.0;
  CHECK(adiff(rep.tail_exponent[0], d_direct) <= 1e-8);
}

TEST_CASE("empirical distribution tightens from n=16 to n=64") {
  const auto N = solve_equilibrium(Potential::gaussian());
  // beta = 2
  auto c16 = gaussian_config(16, 2.0, 7);
  const auto s16 = sample(c16, 1000);
  const auto r16 = ncm_statistics(c16, s16, N);
  auto c64 = gaussian_config(64, 2.0, 7);
  const auto s64 = sample(c64, 10000);
  const auto r64 = ncm_statistics(c64, s64, N);
  CHECK(r64.cdf_sup_distance < r16.cdf_sup_distance);
  // exponential localization: nothing at all beyond the 0.2-neighborhood
  CHECK(r64.outside_fraction[1] == 0.0);

  // beta = 1: same qualitative convergence
  auto b16 = gaussian_config(16, 1.0, 7);
  const auto t16 = sample(b16, 800);
  auto b64 = gaussian_config(64, 1.0, 7);
  const auto t64 = sample(b64, 300);
  CHECK(ncm_statistics(b64, t64, N).cdf_sup_distance <
        ncm_statistics(b16, t16, N).cdf_sup_distance);
}

TEST_CASE("invalid configurations are rejected") {
  auto cfg = gaussian_config(2, 2.0, 0);
  CHECK(thrown_code([&] { hamiltonian(cfg, {0.0, 1.0, 2.0}); }) ==
        errc::invalid_argument);
  CHECK(thrown_code([&] { acceptance_probability(cfg, {0.0, 1.0}, 2, 0.5); }) ==
        errc::invalid_argument);
  auto bad = cfg;
  bad.n = 0;
  CHECK(thrown_code([&] { sample(bad, 10); }) == errc::invalid_argument);
  bad = cfg;
  bad.beta = 0.0;
  CHECK(thrown_code([&] { sample(bad, 10); }) == errc::invalid_argument);
  bad = cfg;
  bad.proposal_scale = -0.1;
  CHECK(thrown_code([&] { sample(bad, 10); }) == errc::invalid_argument);
  const auto N = solve_equilibrium(Potential::gaussian());
  CHECK(thrown_code([&] { ncm_statistics(cfg, EnsembleSample{}, N); }) ==
        errc::invalid_argument);
}

} // TEST_SUITE
