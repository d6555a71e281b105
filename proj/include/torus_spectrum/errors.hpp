#ifndef TORUS_SPECTRUM_ERRORS_HPP
#define TORUS_SPECTRUM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace torus_spectrum {

// Bad input: out-of-range parameters, malformed specs, p <= 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A randomized search used up its attempt budget.
class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant failed. Always a bug in this library.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace torus_spectrum

#endif  // TORUS_SPECTRUM_ERRORS_HPP
