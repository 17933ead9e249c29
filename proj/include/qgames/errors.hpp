#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qgames {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a configured budget (classes per side, memo entries,
// canonicalization size, bit budget, ...) would be exceeded.
class ResourceLimit : public std::runtime_error {
 public:
  ResourceLimit(std::string budget, const std::string& what)
      : std::runtime_error(what), budget_(std::move(budget)) {}
  const std::string& budget() const noexcept { return budget_; }

 private:
  std::string budget_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" +
                           std::to_string(column)),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class NoSeparator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qgames
