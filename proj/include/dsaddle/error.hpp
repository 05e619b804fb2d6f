#pragma once

#include <stdexcept>
#include <string>

namespace dsaddle {

// Base for everything the library throws on bad input or unmet hypotheses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Block shapes or vector lengths that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A hypothesis of the requested construction does not hold for the data,
// so the result would have no meaning.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed input file or unreadable data.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsaddle
