#pragma once

#include <stdexcept>
#include <string>

namespace sympcoh {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix or vector shapes that do not fit the mode count.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation (E < 2m, eta > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An eigen-solver or pairing step did not produce a usable result.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Malformed input documents (JSON/CSV).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace sympcoh
