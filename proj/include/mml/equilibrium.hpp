#pragma once

#include "mml/measure.hpp"
#include "mml/potential.hpp"
#include "mml/quadrature.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace mml {

// Minimizer of the weighted logarithmic energy for a one-cut potential.
// The density is stored spectrally: with t = (lambda - center)/half in [-1,1],
//
//   rho(lambda) = sqrt(1 - t^2) * sum_k u_coeffs[k] U_k(t) / half,
//
// which builds in the soft-edge square-root vanishing.  The logarithmic
// potential and CDF of such a density have closed Chebyshev forms, used here
// for machine-precision evaluation on and off the support.
struct EquilibriumMeasure {
  double a = 0.0;
  double b = 0.0;
  double u_star = 0.0;
  std::vector<double> u_coeffs;     // c_k of the U-series above
  quad::ChebGrid grid;              // Lobatto grid on [a, b]
  std::vector<double> grid_density; // rho at grid nodes (node order)

  double center() const { return 0.5 * (a + b); }
  double half() const { return 0.5 * (b - a); }

  double density(double lambda) const; // 0 outside [a, b]
  double cdf(double lambda) const;     // N((-inf, lambda])

  // L(lambda; N) = -integral of log|lambda - mu| dN(mu), valid on and off
  // the support (closed form in both regions).
  double log_potential(double lambda) const;

  // integral of f dN by Gauss-Chebyshev (second kind) quadrature; exact for
  // polynomial f up to the representation order when order = 0 (auto).
  double integrate(const std::function<double(double)>& f, std::size_t order = 0) const;
};

// Solves the one-cut equilibrium problem: endpoint equations
//   int_a^b V'(t)/sqrt((t-a)(b-t)) dt = 0,
//   int_a^b t V'(t)/sqrt((t-a)(b-t)) dt = 2 pi
// by damped Newton, then the density by Chebyshev inversion of the singular
// integral equation.  grid_order sets the spectral resolution.
// Throws multi-cut-unsupported if no bracket converges or the density
// comes out negative.
EquilibriumMeasure solve_equilibrium(const Potential& p, std::size_t grid_order = 128);

// u(lambda; N) = V(lambda) + 2 L(lambda; N): constant (= u_star) on the
// support, strictly larger off it.
double effective_potential(const Potential& p, const EquilibriumMeasure& N, double lambda);

// E[m] = int V dm + L[m, m].
double energy(const Potential& p, const EquilibriumMeasure& N);
double energy(const Potential& p, const SignedMeasure& m);

// Mixed bilinear form L[N, m] (closed form in N, exact atoms / quadrature cells in m).
double log_energy_bilinear(const EquilibriumMeasure& N, const SignedMeasure& m);

} // namespace mml
