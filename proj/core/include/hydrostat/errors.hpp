#pragma once

#include <stdexcept>
#include <string>

namespace hydrostat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Linear solve failed, a fixed point diverged, or a residual invariant broke.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration. The message names the key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File or stream failure, including malformed snapshot files.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hydrostat
