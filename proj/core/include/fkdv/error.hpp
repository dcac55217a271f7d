#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fkdv {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation outside the domain of an expression or map.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or integrator failed to meet its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A precondition or invariant of a transform, spec or field was violated.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace fkdv
