#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subconj {

enum class ErrorKind {
  invalid_input,  // malformed text, out-of-range letters or options
  unsupported,    // well-formed input outside the scope of an operation
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the text parsers. Positions are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string token, const std::string& message)
      : Error(ErrorKind::invalid_input, "line " + std::to_string(line) + ", column " +
                                            std::to_string(column) + ": " + message +
                                            (token.empty() ? "" : " (at '" + token + "')")),
        line_(line),
        column_(column),
        token_(std::move(token)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string token_;
};

[[noreturn]] inline void throw_invalid(const std::string& message) {
  throw Error(ErrorKind::invalid_input, message);
}

[[noreturn]] inline void throw_unsupported(const std::string& message) {
  throw Error(ErrorKind::unsupported, message);
}

}  // namespace subconj
