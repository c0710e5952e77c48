#pragma once
// Orthonormal polynomials for the n-dependent weight exp(-n V): Jacobi
// recurrence coefficients, log leading coefficients, weighted orthonormal
// functions psi_k = P_k exp(-n V / 2), and the partition-function route to
// the free energy.

#include "mml/potential.hpp"

#include <cstddef>
#include <vector>

namespace mml {

struct RecurrenceTable {
  std::size_t n = 0;             // weight parameter in w_n = exp(-n V)
  std::vector<double> off_diag;  // J_0 .. J_{n-1}, all > 0
  std::vector<double> diag;      // b_0 .. b_{n-1} (zero for even V)
  std::vector<double> log_gamma; // log gamma_0 .. log gamma_n (log domain only)
};

// Discretized Stieltjes (Lanczos with full reorthogonalization) on a dense
// composite Gauss-Legendre discretization of the weight.  Supported n: 1..256.
RecurrenceTable build_recurrence(const Potential& p, std::size_t n);

class PsiEvaluator {
public:
  PsiEvaluator(Potential p, RecurrenceTable table);

  // psi_0(lambda) .. psi_k_max(lambda), k_max <= n.  The three-term
  // recurrence runs on mantissa values with a tracked log-scale factor so
  // that no intermediate overflows; fully damped values round to 0.
  std::vector<double> eval_psi(double lambda, std::size_t k_max) const;

  std::size_t n() const { return table_.n; }
  const RecurrenceTable& table() const { return table_; }
  const Potential& potential() const { return potential_; }

private:
  Potential potential_;
  RecurrenceTable table_;
};

// max_{k,l <= n-1} |int psi_k psi_l - delta_{kl}| on a quadrature rule
// deliberately different from the one build_recurrence used.
double orthonormality_defect(const PsiEvaluator& e);

// -(1/n^2) (log n! - 2 sum_{l<n} log gamma_l): the beta=2 free energy
// -2 (beta n^2)^{-1} log Q_{n,beta} computed from the leading coefficients.
double free_energy(const RecurrenceTable& t);
double free_energy(const Potential& p, std::size_t n);

// Integration domain on which exp(-n V) carries all its mass (shared by the
// builder and the defect check; exposed for tests).
std::pair<double, double> weight_domain(const Potential& p, std::size_t n);

} // namespace mml
