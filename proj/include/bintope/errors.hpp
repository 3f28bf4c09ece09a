#pragma once

#include <stdexcept>
#include <string>

namespace bintope {

/// Matrix shapes do not fit the requested operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the domain of the operation (e.g. a zero
/// coordinate passed to a Laurent monomial).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation called on an object in the wrong state.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class InconsistentSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised after the lifting has been re-drawn too many times without
/// producing a simplicial lower hull.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidCellError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Start-system coefficients are not generic enough to eliminate.
class SingularCoefficientsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bintope
