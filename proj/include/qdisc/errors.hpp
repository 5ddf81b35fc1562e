#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdisc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or count mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix expected to be self-adjoint deviates beyond tolerance.
class NotHermitianError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its admissible domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a model invariant (non-PSD state, incomplete POVM...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or document.
class ParseError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::size_t iterations)
      : Error(what + " (after " + std::to_string(iterations) + " iterations)"),
        iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

}  // namespace qdisc
