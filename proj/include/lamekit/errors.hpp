#pragma once

#include <stdexcept>
#include <string>

namespace lamekit {

/// Base of every library error. `domain()` separates numerical/domain failures
/// (pole hit, vanishing symmetry) from malformed input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual bool domain() const noexcept { return true; }
};

class StepSizeUnderflow : public Error {
 public:
  using Error::Error;
};

class SingularIntegrand : public Error {
 public:
  using Error::Error;
};

class PoleProximity : public Error {
 public:
  using Error::Error;
};

class ZeroSymmetry : public Error {
 public:
  using Error::Error;
};

class RecurrenceBreakdown : public Error {
 public:
  using Error::Error;
};

class NotAnEigenvalue : public Error {
 public:
  using Error::Error;
};

class UnsupportedN : public Error {
 public:
  using Error::Error;
  bool domain() const noexcept override { return false; }
};

class ParseError : public Error {
 public:
  using Error::Error;
  bool domain() const noexcept override { return false; }
};

}  // namespace lamekit
