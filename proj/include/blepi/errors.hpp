#pragma once

#include <stdexcept>
#include <string>

namespace blepi {

// Factorization found a nonpositive pivot/eigenvalue: the input is not
// positive definite within tolerance.
class NotPositiveDefiniteError : public std::runtime_error {
 public:
  explicit NotPositiveDefiniteError(const std::string& what)
      : std::runtime_error(what) {}
};

// A matrix required to have full rank does not.
class RankDeficientError : public std::runtime_error {
 public:
  explicit RankDeficientError(const std::string& what)
      : std::runtime_error(what) {}
};

// A numeric evaluation left its valid domain (nonpositive derivative,
// non-finite log-density, ...).
class NumericalDomainError : public std::runtime_error {
 public:
  explicit NumericalDomainError(const std::string& what)
      : std::runtime_error(what) {}
};

// A sample set degenerated (duplicate points with zero neighbor distance).
class DegenerateSampleError : public std::runtime_error {
 public:
  explicit DegenerateSampleError(const std::string& what)
      : std::runtime_error(what) {}
};

// Invalid user-supplied parameter (out-of-range coefficient, bad spec, ...).
// Structural problems (dimension mismatches) also land here.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace blepi
