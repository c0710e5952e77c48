#pragma once
// Verification harness: assembles equilibrium, kernel, and gap outputs into
// quantitative convergence diagnostics — sup-norm density error, sine-kernel
// error, marginal and gap universality, free-energy convergence, and the
// Fourier shape diagnostic of the rescaled kernel.

#include "mml/equilibrium.hpp"
#include "mml/gap.hpp"
#include "mml/kernel.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace mml {

// sup over a 257-point grid on [a+d, b-d] of |rho_n - rho|.
double density_error(const KernelField& f, const EquilibriumMeasure& N, double d);

// sup over |x|,|y| <= box of |(n rho_n(l0))^{-1} K_n(l0 + x/(n rho_n), ...) - S(x-y)|.
double kernel_error(const KernelField& f, double lambda0, double box);

// Rescaled l-point marginal against the universal determinant value:
// returns {rho_n(l0)^{-l} p_l(l0 + x_i/(n rho_n)), det S(x_i - x_j)}.
std::pair<double, double> marginal_universality(const KernelField& f, double lambda0,
                                                const std::vector<double>& points);

struct FourierDiagnostic {
  std::vector<double> p_grid;
  std::vector<double> f_values;   // F_n(p): cumulative transform integral
  double total_jump = 0.0;        // F_n(p_max) - F_n(-p_max) -> 2 pi rho(l0)
  double slope_at_zero = 0.0;     // F_n'(0) -> 1
  double asymmetry = 0.0;         // sup_p of the odd-part transform magnitude
  double monotonicity_slack = 0.0; // largest decrease of F_n along the grid
  std::string window_note;
};

// Tapered rescaled kernel K*(x) = K_n(x,0) on |x| <= window with linear
// roll-off over one further unit, transformed on a uniform p-grid.
FourierDiagnostic fourier_diagnostic(const KernelField& f, double lambda0, double window);

struct RunConfig {
  Potential potential = Potential::gaussian();
  std::vector<std::size_t> n_list = {8, 16, 32, 64};
  double lambda0 = 0.0;
  double d = 0.5;
  double box = 2.0;
  double window = 16.0;
  std::vector<double> gap_s = {0.5, 1.0, 1.5, 2.0};
  std::size_t gap_order = 64;
};

struct ConvergenceRecord {
  std::size_t n = 0;
  double sup_density_error = 0.0;
  double kernel_sup_error = 0.0;
  double gap_sup_error = 0.0;
  double free_energy_error = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRecord> records; // sorted by n
  double slope_density = 0.0;             // log-log fitted slopes (reported only)
  double slope_kernel = 0.0;
  double slope_gap = 0.0;
  double slope_free_energy = 0.0;
  double window_lo = 0.0, window_hi = 0.0; // (a+d, b-d)
  std::string window_note;
};

ConvergenceReport run_suite(const RunConfig& config);

} // namespace mml
