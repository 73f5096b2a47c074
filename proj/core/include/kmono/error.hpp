#pragma once

#include <stdexcept>
#include <string>

namespace kmono {

/// Bad caller input: malformed data, violated preconditions, unknown options.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine failed (non-convergence, indefinite covariance, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kmono
