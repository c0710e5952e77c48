#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mml {

// Finite signed measure: point atoms plus uniform-density cells.  This is the
// test-measure type for the logarithmic energy form; smooth measures enter as
// collections of narrow cells ("smeared atoms").
struct SignedMeasure {
  struct Atom {
    double x = 0.0;
    double w = 0.0;
  };
  struct Cell {
    double lo = 0.0;
    double hi = 0.0;
    double mass = 0.0; // uniform density mass/(hi-lo)
  };

  std::vector<Atom> atoms;
  std::vector<Cell> cells;

  void add_atom(double x, double w) { atoms.push_back({x, w}); }
  void add_cell(double lo, double hi, double mass);

  static SignedMeasure uniform(double lo, double hi, double mass = 1.0);

  double total_charge() const;
  bool empty() const { return atoms.empty() && cells.empty(); }

  // Copy with every atom replaced by a width-`width` uniform cell.
  SignedMeasure smeared(double width) const;

  // integral of f against the measure (atoms exact, cells by Gauss-Legendre).
  double integrate(const std::function<double(double)>& f, std::size_t order = 64) const;
};

// L[m1, m2] = -double integral of log|x-y| dm1 dm2, evaluated in closed form
// (atom-atom, atom-cell and cell-cell log integrals are all elementary).
// Coincident atoms across the two arguments give +/-inf, as the true energy.
double log_energy_bilinear(const SignedMeasure& m1, const SignedMeasure& m2);

struct FourierEnergyOptions {
  double p_max = 0.0;       // 0 = automatic from smearing width and tolerance
  double panel_width = 0.0; // 0 = automatic from the spatial extent
  std::size_t order = 16;   // Gauss-Legendre order per panel
};

// Same bilinear form through the spectral side: integral over p > 0 of
// m1^(p) m2^(-p) / p, by composite quadrature with tail truncation.
// Requires m1 to have zero total charge (otherwise the integral diverges).
double log_energy_fourier(const SignedMeasure& m1, const SignedMeasure& m2,
                          const FourierEnergyOptions& opts = {});

} // namespace mml
