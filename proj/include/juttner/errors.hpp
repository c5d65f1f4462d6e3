#pragma once

#include <stdexcept>
#include <string>

namespace juttner {

/// Input outside the mathematical domain (nonpositive or non-finite arguments).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine could not reach the requested accuracy within its budget.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root bracketing failed; carries the range that was searched.
class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, double lo, double hi)
      : std::runtime_error(what), searched_lo(lo), searched_hi(hi) {}

  double searched_lo;
  double searched_hi;
};

/// An identity that holds mathematically was violated numerically.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace juttner
