#pragma once

#include <stdexcept>
#include <string>

#ifndef MESHFREE_CHECKS
#define MESHFREE_CHECKS 1
#endif

namespace meshfree {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid shapes, spacing functions or node sets.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Singular or ill-posed local systems, solver breakdown, instability.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration or command line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Raised by checked-build guards (row ownership, assembly order).
class GuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace meshfree
