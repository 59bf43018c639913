#pragma once

#include <stdexcept>
#include <string>

namespace curv {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched jet or tensor shapes (dim, order, valence).
struct ShapeError : Error {
  using Error::Error;
};

// Math function evaluated outside its domain, division by a near-zero germ.
struct DomainError : Error {
  using Error::Error;
};

// Errors that abort a numeric run (CLI exit code 3).
struct NumericError : Error {
  using Error::Error;
};

struct DegenerateMetricError : NumericError {
  using NumericError::NumericError;
};

struct JetBudgetError : NumericError {
  JetBudgetError() : NumericError("jet budget exhausted; raise --order") {}
  explicit JetBudgetError(const std::string& msg) : NumericError(msg) {}
};

// Metric file syntax or validation error with a source location.
struct ParseError : Error {
  ParseError(const std::string& msg, int line_, int col_)
      : Error(msg + " (line " + std::to_string(line_) + ", column " +
              std::to_string(col_) + ")"),
        line(line_),
        col(col_) {}
  int line;
  int col;
};

}  // namespace curv
