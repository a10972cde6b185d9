#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace parisian {

// Invalid model or configuration parameters (H outside (0,1), beta <= H, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Gram matrix of a covariance model is not positive semidefinite.
class CovarianceError : public std::runtime_error {
 public:
  CovarianceError(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

// Grid step too coarse to resolve the Parisian window.
class ResolutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parisian ruin time reported before the classical ruin time.
class OrderingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A required constant (Pickands value) was not supplied.
class DependencyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A sampling loop hit its replication cap before collecting enough samples.
class PartialResultError : public std::runtime_error {
 public:
  PartialResultError(const std::string& what, std::size_t achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  std::size_t achieved() const noexcept { return achieved_; }

 private:
  std::size_t achieved_;
};

namespace detail {
[[noreturn]] void throw_parameter(const std::string& what);
inline void require(bool cond, const char* what) {
  if (!cond) throw_parameter(what);
}
}  // namespace detail

}  // namespace parisian
