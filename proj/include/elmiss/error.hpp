#pragma once

#include <stdexcept>
#include <string>

namespace elmiss {

// Base of every error thrown by the library. The CLI maps subclasses onto
// exit codes (data errors -> 2, numerical failures -> 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Regression function evaluated at a parameter point where it is undefined.
class SingularParameterError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Malformed input files, inconsistent rows, bad configuration values.
class DataError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class UnsupportedMethodError : public Error {
 public:
  using Error::Error;
};

}  // namespace elmiss
