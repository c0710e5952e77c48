#pragma once
// Christoffel-Darboux reproducing kernel K_n, finite-n eigenvalue density
// rho_n, determinant marginals, the bulk-rescaled kernel, exact finite-n
// kernel identities, and the determinantal variance of linear statistics.

#include "mml/orthopoly.hpp"
#include "mml/potential.hpp"

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace mml {

// Residuals of the exact kernel identities; every field should sit at
// quadrature-noise level for a correctly built kernel.
struct IdentityReport {
  double pair_moment = 0.0;        // iint (lambda-mu)^2 K_n^2
  double pair_moment_target = 0.0; // 2 J_{n-1}^2
  double residual_a = 0.0;         // |pair_moment - target|
  double residual_b = 0.0;         // sup | int (lambda-mu) K_n^2 dmu - J psi_{n-1} psi_n |
  double residual_c = 0.0;         // sup | rho_n' - int (V'(mu)-V'(lambda)) K_n^2 dmu |
  std::vector<double> probe_points; // the bulk points used for (b) and (c)
};

class KernelField {
public:
  KernelField(const Potential& p, std::size_t n);
  explicit KernelField(PsiEvaluator psi);

  // K_n(lambda, mu): Christoffel-Darboux quotient away from the diagonal,
  // direct psi sum within delta_switch of it (the quotient loses digits there).
  double kernel(double lambda, double mu) const;

  // rho_n(lambda) = K_n(lambda, lambda) / n.
  double density(double lambda) const;

  // l-point correlation density ((n-l)!/n!) det{K_n(lambda_j, lambda_k)}.
  double marginal(const std::vector<double>& points) const;

  // Bulk rescaling: n^{-1} K_n(lambda0 + x/n, lambda0 + y/n).
  double rescaled(double lambda0, double x, double y) const;

  IdentityReport cd_identities() const;

  // Var{ N_n[phi] } = n^{-2} [ int phi^2 K_n(l,l) dl - iint phi phi K_n^2 ].
  double variance_linear_stat(const std::function<double(double)>& phi) const;

  std::size_t n() const { return psi_.n(); }
  double j_last() const { return j_last_; }
  const PsiEvaluator& psi() const { return psi_; }
  std::pair<double, double> domain() const { return {lo_, hi_}; }

  // Interval where rho_n exceeds 20% of its peak, shrunk by 20% per side;
  // the self-contained notion of "bulk" used for probe points.
  std::pair<double, double> bulk_window() const;

private:
  PsiEvaluator psi_;
  double j_last_;
  double lo_, hi_;
  double delta_switch_;
};

} // namespace mml
