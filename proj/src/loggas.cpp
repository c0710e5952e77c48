#include "mml/loggas.hpp"

#include "mml/error.hpp"
#include "mml/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mml {

double hamiltonian(const GasConfig& cfg, const std::vector<double>& lambda) {
  require(lambda.size() == cfg.n, errc::invalid_argument,
          "hamiltonian: configuration size differs from cfg.n");
  double h = 0.0;
  for (double x : lambda) h += cfg.potential.eval(x, 0);
  // Pair coefficient 2/n makes exp(-beta*n*H/2) carry the Vandermonde power
  // |Delta|^beta, matching the joint eigenvalue density and the beta=2
  // orthogonal-polynomial weight exp(-nV).
  const double pair_coeff = 2.0 / static_cast<double>(cfg.n);
  for (std::size_t i = 0; i < lambda.size(); ++i)
    for (std::size_t j = i + 1; j < lambda.size(); ++j) {
      const double d = std::abs(lambda[i] - lambda[j]);
      if (d == 0.0) return std::numeric_limits<double>::infinity();
      h -= pair_coeff * std::log(d);
    }
  return h;
}

double acceptance_probability(const GasConfig& cfg, const std::vector<double>& lambda,
                              std::size_t site, double proposed) {
  require(site < lambda.size(), errc::invalid_argument, "acceptance_probability: bad site");
  const double old_x = lambda[site];
  // dH touches only the moved site: its field term plus one interaction row.
  double dh = cfg.potential.eval(proposed, 0) - cfg.potential.eval(old_x, 0);
  const double pair_coeff = 2.0 / static_cast<double>(cfg.n);
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (j == site) continue;
    const double dnew = std::abs(proposed - lambda[j]);
    if (dnew == 0.0) return 0.0; // coincident points carry infinite energy
    dh -= pair_coeff * (std::log(dnew) - std::log(std::abs(old_x - lambda[j])));
  }
  const double log_ratio = -0.5 * cfg.beta * static_cast<double>(cfg.n) * dh;
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

EnsembleSample sample(const GasConfig& cfg, std::size_t n_samples) {
  require(cfg.n >= 1, errc::invalid_argument, "sample: n must be >= 1");
  require(cfg.beta > 0.0, errc::invalid_argument, "sample: beta must be > 0");
  require(cfg.proposal_scale > 0.0, errc::invalid_argument,
          "sample: proposal_scale must be > 0");
  EnsembleSample out;
  out.tuned_scale = cfg.proposal_scale;
  if (n_samples == 0) {
    out.acceptance_in_band = true; // vacuous: no sampling phase ran
    return out;
  }

  const std::size_t burn_in = cfg.burn_in > 0 ? cfg.burn_in : 100000 * cfg.n;
  const std::size_t thin = cfg.thin > 0 ? cfg.thin : cfg.n;
  rng::Counter gen = rng::Counter::make(cfg.seed, 0);

  // Start evenly spread around the potential minimum; burn-in relaxes it.
  double xmin = 0.0, vmin = std::numeric_limits<double>::infinity();
  for (double x : cfg.potential.audit_grid()) {
    const double v = cfg.potential.eval(x, 0);
    if (v < vmin) {
      vmin = v;
      xmin = x;
    }
  }
  std::vector<double> state(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i)
    state[i] = xmin - 1.0 + 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(cfg.n);

  double scale = cfg.proposal_scale;
  std::size_t window_accepts = 0, window_moves = 0;
  const auto step = [&](std::size_t move_index) -> bool {
    const std::size_t site = move_index % cfg.n;
    const double proposed = state[site] + scale * gen.next_normal();
    const double pa = acceptance_probability(cfg, state, site, proposed);
    const bool accept = gen.next_uniform() < pa;
    if (accept) state[site] = proposed;
    return accept;
  };

  for (std::size_t m = 0; m < burn_in; ++m) {
    window_accepts += step(m) ? 1 : 0;
    if (++window_moves == 1000) {
      // Nudge the proposal width toward 40% acceptance, then keep going.
      const double rate = static_cast<double>(window_accepts) / 1000.0;
      scale = std::clamp(scale * std::exp(0.5 * (rate - 0.40)), 1e-5, 50.0);
      window_accepts = window_moves = 0;
    }
  }
  out.tuned_scale = scale; // frozen from here on

  std::size_t accepts = 0, moves = 0;
  out.configurations.reserve(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (std::size_t t = 0; t < thin; ++t) {
      accepts += step(moves) ? 1 : 0;
      ++moves;
    }
    std::vector<double> snap = state;
    std::sort(snap.begin(), snap.end());
    out.configurations.push_back(std::move(snap));
  }
  out.acceptance_rate = static_cast<double>(accepts) / static_cast<double>(moves);
  out.acceptance_in_band = out.acceptance_rate >= 0.1 && out.acceptance_rate <= 0.9;
  return out;
}

namespace {

double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / (static_cast<double>(v.size()) - 1.0);
}

} // namespace

NcmReport ncm_statistics(const GasConfig& cfg, const EnsembleSample& s,
                         const EquilibriumMeasure& N) {
  require(!s.configurations.empty(), errc::invalid_argument,
          "ncm_statistics: empty sample");
  NcmReport rep;
  const double n_inv = 1.0 / static_cast<double>(cfg.n);
  const double center = 0.5 * (N.a + N.b);

  // Sup distance between the mean empirical CDF and the equilibrium CDF on a
  // dense grid spanning the support plus the off-support shoulders.
  const std::size_t grid = 513;
  const double glo = N.a - 1.0, ghi = N.b + 1.0;
  std::vector<double> mean_cdf(grid, 0.0);
  for (const auto& conf : s.configurations) {
    std::size_t idx = 0; // conf is sorted: sweep once per configuration
    for (std::size_t g = 0; g < grid; ++g) {
      const double x = glo + (ghi - glo) * static_cast<double>(g) / (grid - 1.0);
      while (idx < conf.size() && conf[idx] <= x) ++idx;
      mean_cdf[g] += static_cast<double>(idx);
    }
  }
  for (std::size_t g = 0; g < grid; ++g) {
    const double x = glo + (ghi - glo) * static_cast<double>(g) / (grid - 1.0);
    const double emp = mean_cdf[g] * n_inv / static_cast<double>(s.configurations.size());
    rep.cdf_sup_distance = std::max(rep.cdf_sup_distance, std::abs(emp - N.cdf(x)));
  }

  // Linear statistics n^{-1} sum phi(l_i) across stored configurations.
  std::vector<double> st_id, st_sq, st_bump;
  st_id.reserve(s.configurations.size());
  st_sq.reserve(s.configurations.size());
  st_bump.reserve(s.configurations.size());
  for (const auto& conf : s.configurations) {
    double a = 0.0, b = 0.0, c = 0.0;
    for (double x : conf) {
      a += x;
      b += x * x;
      c += std::exp(-(x - center) * (x - center));
    }
    st_id.push_back(a * n_inv);
    st_sq.push_back(b * n_inv);
    st_bump.push_back(c * n_inv);
  }
  rep.var_identity = sample_variance(st_id);
  rep.var_square = sample_variance(st_sq);
  rep.var_bump = sample_variance(st_bump);

  const double eps[2] = {0.1, 0.2};
  for (int e = 0; e < 2; ++e) {
    std::size_t outside = 0, total = 0;
    for (const auto& conf : s.configurations)
      for (double x : conf) {
        outside += (x < N.a - eps[e] || x > N.b + eps[e]) ? 1 : 0;
        ++total;
      }
    rep.outside_fraction[e] = static_cast<double>(outside) / static_cast<double>(total);

    // d(eps) = inf over the complement of the eps-neighborhood of the
    // effective-potential excess over u_*, divided by 4.
    double dmin = std::numeric_limits<double>::infinity();
    const std::size_t pts = 201;
    for (std::size_t i = 0; i < pts; ++i) {
      const double t = static_cast<double>(i) / (pts - 1.0);
      const double right = N.b + eps[e] + 4.0 * t;
      const double left = N.a - eps[e] - 4.0 * t;
      dmin = std::min(dmin, effective_potential(cfg.potential, N, right) - N.u_star);
      dmin = std::min(dmin, effective_potential(cfg.potential, N, left) - N.u_star);
    }
    rep.tail_exponent[e] = dmin / 4.0;
    rep.predicted_tail[e] = std::exp(-static_cast<double>(cfg.n) * rep.tail_exponent[e]);
  }
  return rep;
}

} // namespace mml
