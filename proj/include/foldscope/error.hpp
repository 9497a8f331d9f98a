#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace foldscope {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A finite instruction set was asked for f_s beyond its last entry.
class InstructionExhausted : public Error {
 public:
  explicit InstructionExhausted(std::size_t index)
      : Error("instruction f_" + std::to_string(index) + " unavailable"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Malformed text input (instruction syntax, automaton tables).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  /// 1-based line number, 0 when the input is a single token.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The automaton stopped in a state without an output value.
class UndefinedOutput : public Error {
 public:
  using Error::Error;
};

/// Two factors share the maximal first start where a unique one is required.
class AmbiguityError : public Error {
 public:
  using Error::Error;
};

}  // namespace foldscope
