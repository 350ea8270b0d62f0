#pragma once

#include <stdexcept>
#include <string>

namespace steinchaos {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (non-finite input, r <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (basis index, chaos order, node count) was exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition of an operation does not hold (e.g. E[phi] != 0).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent user input (model files, densities, functionals).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to reach its requested accuracy.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not supported for this kind of object.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace steinchaos
