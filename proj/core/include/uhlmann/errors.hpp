#pragma once

#include <stdexcept>
#include <string>

namespace uhlmann {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Rejected input: malformed matrices, invalid model files, bad arguments.
class InputError : public Error {
  public:
    using Error::Error;
};

/// A parameter value (or a finite-difference stencil around it) left the
/// model domain.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A state eigenvalue fell below the positivity floor. Strictly positive
/// states are a standing assumption, so this is a domain violation.
class SingularStateError : public DomainError {
  public:
    using DomainError::DomainError;
};

/// An iterative or discretized computation did not reach its tolerance.
class ConvergenceError : public Error {
  public:
    using Error::Error;
};

/// A theorem precondition does not hold, e.g. an optimal estimator was
/// requested where the SLDs do not commute.
class TheoremViolationError : public Error {
  public:
    using Error::Error;
};

/// Process exit code for an error, as used by the CLI:
/// 2 input, 3 domain, 4 convergence, 5 theorem precondition.
int exit_code_for(const std::exception& e);

}  // namespace uhlmann
