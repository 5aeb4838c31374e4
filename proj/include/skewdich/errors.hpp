#pragma once

#include <stdexcept>
#include <string>

namespace skewdich {

/// Raised when an operation is called outside its domain (negative times,
/// misordered time triples, polynomial classes on s < 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised for malformed parameters or inputs (non-idempotent projectors,
/// empty grids, unparsable instance specs).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A projector pair that fails the invariance check on the validation grid.
class IncompatibleProjectors : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A certified stronger dichotomy class alongside a violated weaker one.
class LatticeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline void require_domain(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

inline void require_valid(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace detail
}  // namespace skewdich
