#pragma once

#include <stdexcept>
#include <string>

namespace lpai {

/// Base of every error thrown by the library. The message is prefixed with the
/// module that raised it ("qdyn: ...", "spectrum: ...").
class Error : public std::runtime_error {
 public:
  Error(const std::string& module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(module) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Pre/post-selection overlap too small for the weak value to be meaningful.
class SingularPostSelection : public Error {
 public:
  using Error::Error;
};

/// A grid does not cover the support of the distribution placed on it.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// A grid is too coarse for the feature it has to resolve.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Requested phase lies outside a calibration table's range.
class CalibrationRangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace lpai
