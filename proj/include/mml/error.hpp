#pragma once

#include <stdexcept>
#include <string>

namespace mml {

// Failure categories surfaced through the C API as status codes.
enum class errc {
  invalid_argument = 1,       // bad parameter or malformed input
  unsupported_derivative = 2, // derivative order not available for this kind
  multi_cut_unsupported = 3,  // equilibrium support is not a single interval
  resolution = 4,             // quadrature/discretization cannot resolve the request
  io = 5,                     // file or serialization failure
  internal = 6                // invariant violation inside the library
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

} // namespace mml
