#ifndef ATOMCOV_ERRORS_HPP
#define ATOMCOV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace atomcov {

// Shape or contract violation on an input value.
struct DimensionError : std::invalid_argument {
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// A matrix required to be positive definite is not.
struct NotPositiveDefinite : std::domain_error {
  explicit NotPositiveDefinite(const std::string& what) : std::domain_error(what) {}
};

// A matrix required to be positive semidefinite has an eigenvalue below tolerance.
struct NotPsd : std::domain_error {
  explicit NotPsd(const std::string& what) : std::domain_error(what) {}
};

// Iteration produced NaN/Inf or lost positive definiteness beyond repair.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Bad run configuration (CLI layer).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace atomcov

#endif
