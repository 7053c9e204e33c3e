#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coxgates {

/// Input violates a documented invariant (bad Coxeter matrix, bad subset, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operands come from different fields or different Coxeter systems.
class ContextMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured cap (element count, ball size, state count) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Garside projection found no unique prefix-maximum.
class NotJoinClosed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two automata were compared but do not accept the same language.
class LanguageMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A proven theorem appears violated; always a bug in this library.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " (at line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace coxgates
