#pragma once

#include <stdexcept>
#include <string>

namespace wcgpr {

/// Shape, range or structure violation in the inputs of an operation.
class StructuralError : public std::invalid_argument {
 public:
  explicit StructuralError(const std::string& what) : std::invalid_argument(what) {}
};

/// A covariance factorization failed even after the jitter escalation.
class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wcgpr
