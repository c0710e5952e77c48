#pragma once
// Shared utilities for the unit suites: NaN-safe distances, a deterministic
// uniform source, and an exception-code extractor for error-path checks.

#include "mml/error.hpp"
#include "mml/rng.hpp"

#include <cmath>
#include <cstdint>

namespace testutil {

// |a - b| that maps NaN/inf to a huge value so `adiff(...) <= tol` fails
// loudly instead of silently passing on NaN comparisons.
inline double adiff(double a, double b) {
  const double d = std::abs(a - b);
  return std::isfinite(d) ? d : 1e300;
}

inline mml::rng::Counter counter(std::uint64_t seed, std::uint64_t stream = 0) {
  return mml::rng::Counter::make(seed, stream);
}

// Sentinels outside the real error-code range.
constexpr mml::errc no_throw = static_cast<mml::errc>(0);
constexpr mml::errc wrong_exception = static_cast<mml::errc>(99);

template <typename F>
mml::errc thrown_code(F&& f) {
  try {
    f();
  } catch (const mml::Error& e) {
    return e.code();
  } catch (...) {
    return wrong_exception;
  }
  return no_throw;
}

} // namespace testutil
