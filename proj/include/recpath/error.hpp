#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace recpath {

enum class ErrorKind {
  Lex,
  Parse,
  Resolve,
  Duplicate,
  NodeMap,
  Omit,
  NotRecursive,
  Limit,
  StepLimitExceeded,
  DivideByZero,
  ArithmeticOverflow,
  InputExhausted,
  Arity,
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Lex: return "LexError";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Resolve: return "ResolveError";
    case ErrorKind::Duplicate: return "DuplicateError";
    case ErrorKind::NodeMap: return "NodeMapError";
    case ErrorKind::Omit: return "OmitError";
    case ErrorKind::NotRecursive: return "NotRecursive";
    case ErrorKind::Limit: return "LimitError";
    case ErrorKind::StepLimitExceeded: return "StepLimitExceeded";
    case ErrorKind::DivideByZero: return "DivideByZero";
    case ErrorKind::ArithmeticOverflow: return "ArithmeticOverflow";
    case ErrorKind::InputExhausted: return "InputExhausted";
    case ErrorKind::Arity: return "ArityError";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

/// Base of every error the library raises. what() carries a one-line,
/// human-readable message prefixed with the error kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Errors tied to a source location (1-based).
class SourceError : public Error {
 public:
  SourceError(ErrorKind kind, int line, int column, const std::string& message)
      : Error(kind, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class LexError : public SourceError {
 public:
  LexError(int line, int column, char offending, const std::string& message)
      : SourceError(ErrorKind::Lex, line, column, message), offending_(offending) {}

  char offending() const noexcept { return offending_; }

 private:
  char offending_;
};

class ParseError : public SourceError {
 public:
  ParseError(int line, int column, std::string expected, std::string found)
      : SourceError(ErrorKind::Parse, line, column,
                    "expected " + expected + ", found '" + found + "'"),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::string expected_;
  std::string found_;
};

class ResolveError : public SourceError {
 public:
  ResolveError(std::string name, int line, int column, const std::string& detail)
      : SourceError(ErrorKind::Resolve, line, column, detail + " '" + name + "'"),
        name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DuplicateError : public SourceError {
 public:
  DuplicateError(std::string name, int line, int column)
      : SourceError(ErrorKind::Duplicate, line, column, "duplicate definition of '" + name + "'"),
        name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class NodeMapError : public Error {
 public:
  explicit NodeMapError(const std::string& message) : Error(ErrorKind::NodeMap, message) {}
};

class OmitError : public Error {
 public:
  explicit OmitError(const std::string& message) : Error(ErrorKind::Omit, message) {}
};

class NotRecursive : public Error {
 public:
  explicit NotRecursive(const std::string& function)
      : Error(ErrorKind::NotRecursive, "function '" + function + "' is not recursive") {}
};

class LimitError : public Error {
 public:
  explicit LimitError(const std::string& message) : Error(ErrorKind::Limit, message) {}
};

/// Raised by the interpreter. node() is the global flow-graph id executing
/// when the error occurred, or 0 when not attributable to a node.
class RuntimeError : public Error {
 public:
  RuntimeError(ErrorKind kind, int node, const std::string& message)
      : Error(kind, node > 0 ? message + " at node " + std::to_string(node) : message),
        node_(node),
        detail_(message) {}

  int node() const noexcept { return node_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  int node_;
  std::string detail_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorKind::Io, message) {}
};

}  // namespace recpath
