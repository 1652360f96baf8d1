#pragma once

#include <stdexcept>
#include <string>

namespace flexsndp {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The instance (or a stage of it) admits no feasible solution.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed its configured size guard.
class GuardError : public Error {
 public:
  using Error::Error;
};

// An iterative procedure did not converge within its budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace flexsndp
