#pragma once

#include <stdexcept>
#include <string>

namespace sharpe {

/// Raised when arguments violate an operation's preconditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a window has zero volatility, so its Sharpe ratio is undefined.
class DegenerateVolatilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised for malformed or inconsistent input data (CSV files, date coverage).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sharpe
