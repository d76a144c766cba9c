#pragma once

#include <stdexcept>
#include <string>

namespace pvmech {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad dimensions, out-of-range indices, unparsable numbers.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its configured state budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap before meeting its tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace pvmech
