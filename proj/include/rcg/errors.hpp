#pragma once

#include <stdexcept>
#include <string>

namespace rcg {

// Argument or state outside the mathematically valid domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Point at (or numerically indistinguishable from) the cut locus, where
// azimuthal charts and radial densities degenerate.
struct CutLocusError : DomainError {
  using DomainError::DomainError;
};

// An iterative numerical routine failed to reach its tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested moment does not exist (heavy-tailed law on unbounded support).
struct DivergentMomentError : DomainError {
  using DomainError::DomainError;
};

// Rejection-sampling envelope bound was violated by the target ratio.
struct EnvelopeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adaptive ODE step size fell below the representable floor.
struct StepSizeUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed textual input (law strings, chart strings, config files).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rcg
