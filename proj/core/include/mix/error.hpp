#pragma once

#include <stdexcept>
#include <string>

namespace mix {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition on caller-supplied data.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An enumeration, expansion or grid exceeded its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed spec, certificate or matrix file. `where` names the field or line.
class SchemaError : public Error {
 public:
  SchemaError(std::string where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace mix
