#pragma once

#include <stdexcept>
#include <string>

#include "annulus/types.hpp"

namespace annulus {

/// Input outside the mathematical domain of an operation (z = 0, kappa <= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Result does not fit in double precision.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Newton iteration ran out of steps or left the evaluable region.
class NoConvergenceError : public std::runtime_error {
 public:
  NoConvergenceError(const std::string& what, Complex last_iterate, int iterations)
      : std::runtime_error(what), last_iterate_(last_iterate), iterations_(iterations) {}

  Complex last_iterate() const noexcept { return last_iterate_; }
  int iterations() const noexcept { return iterations_; }

 private:
  Complex last_iterate_;
  int iterations_;
};

class DerivativeUnderflowError : public std::runtime_error {
 public:
  DerivativeUnderflowError(const std::string& what, Complex at)
      : std::runtime_error(what), at_(at) {}
  Complex at() const noexcept { return at_; }

 private:
  Complex at_;
};

/// A real zero could not be bracketed; index() is the position in the requested list.
class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, int index) : std::runtime_error(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// A requested feature (extremum, crossing) does not occur on the given path.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace annulus
