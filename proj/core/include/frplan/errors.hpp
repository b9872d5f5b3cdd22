#pragma once

#include <stdexcept>
#include <string>

namespace frplan {

// Invalid or inconsistent user-supplied configuration. The CLI maps this to
// exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to reach its accuracy target (quadrature
// non-convergence, bracket failure, ...). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace frplan
