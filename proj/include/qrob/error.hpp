#pragma once

#include <stdexcept>
#include <string>

namespace qrob {

// Bad user input: malformed files, out-of-range parameters, dimension
// mismatches. The CLI maps this to exit code 1.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: solver did not converge, certificate residual too
// large, audit failed. The CLI maps this to exit code 2.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qrob
