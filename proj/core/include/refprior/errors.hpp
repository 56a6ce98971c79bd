#ifndef REFPRIOR_ERRORS_HPP
#define REFPRIOR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace refprior {

// Base class for every failure raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside its mathematical domain (theta out of range, u not in
// (0,1), alpha not in (0,1), nonpositive ratio, ...).
struct DomainError : Error {
  using Error::Error;
};

// Sample with no observations where at least one is required.
struct EmptySampleError : Error {
  using Error::Error;
};

// Sample that is structurally incompatible with the requested operation,
// e.g. an empty integration interval for the marginal constant.
struct DegenerateSampleError : Error {
  using Error::Error;
};

// Paired inputs whose dimensions disagree.
struct ShapeMismatchError : Error {
  using Error::Error;
};

// Adaptive quadrature failed to reach its error target within the
// subdivision budget. Recoverable at the experiment level: the grid point
// is recorded as an error row and the run continues.
struct QuadratureError : Error {
  using Error::Error;
};

// An integrand or statistic evaluated to NaN. Unlike -infinity (a legal
// support sentinel), NaN always indicates a bug or invalid input.
struct NaNError : Error {
  using Error::Error;
};

// An internal invariant was violated; indicates a defect, not bad input.
struct InternalError : Error {
  using Error::Error;
};

// A reference density was required (for scaling or scoring) but none is
// available.
struct MissingReferenceError : Error {
  using Error::Error;
};

// Malformed configuration file, unknown key, or invalid CLI value.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace refprior

#endif
