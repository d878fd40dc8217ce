#pragma once

#include <stdexcept>
#include <string>

namespace tropic {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong dimensions, bad JSON, non-rational scalars.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A configured work limit was hit. `flag()` names the knob that raises it.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::string flag)
      : Error(what), flag_(std::move(flag)) {}
  const std::string& flag() const { return flag_; }

 private:
  std::string flag_;
};

/// An operation was called outside its domain (e.g. m <= n for a subsum
/// identity, or a non-simple arrangement where simplicity is required).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Raised by queries that are undefined on the empty polyhedron.
class EmptyPolyhedron : public Error {
 public:
  EmptyPolyhedron() : Error("polyhedron is empty") {}
};

}  // namespace tropic
