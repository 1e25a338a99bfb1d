#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sibmm {

// Argument outside the mathematical domain of an operation (u outside [0,1],
// pd outside (0,1), infeasible beta moments, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid scenario or run configuration. `field` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Malformed portfolio CSV. Row 1 is the header row; columns are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t row, std::string column, const std::string& message)
      : std::runtime_error("row " + std::to_string(row) +
                           (column.empty() ? std::string{} : ", column '" + column + "'") +
                           ": " + message),
        row_(row),
        column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

// Request outside what an algorithm supports (exact enumeration with too
// many borrowers, stochastic LGD in the oracle).
class ScopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sibmm
