#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mtmorph {

/// Base of every error raised by the toolkit.
struct Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line` and `column` are 1-based; 0 means unknown.
struct ParseError : public Error {
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line(line),
        column(column) {}
  explicit ParseError(const std::string& message) : Error(message) {}

  std::size_t line = 0;
  std::size_t column = 0;
};

struct ValidationError : public Error {
  using Error::Error;
};

struct ConformanceError : public Error {
  using Error::Error;
};

struct UnknownType : public Error {
  using Error::Error;
};

/// Lexical or grammatical error in transformation text.
struct SyntaxError : public ParseError {
  using ParseError::ParseError;
};

/// Structurally parsable transformation that violates a static rule
/// (unknown variable, duplicate rule, duplicate signature).
struct AnalysisError : public ParseError {
  using ParseError::ParseError;
};

struct ExecutionError : public Error {
  using Error::Error;
};

struct InconsistentPattern : public Error {
  using Error::Error;
};

struct InfeasibleMutation : public Error {
  using Error::Error;
};

struct InvalidLocus : public Error {
  using Error::Error;
};

struct UnsatisfiableSeed : public Error {
  using Error::Error;
};

struct MetamodelMismatch : public Error {
  using Error::Error;
};

}  // namespace mtmorph
