#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ssr {

enum class ExitCode : int {
  ok = 0,
  invalid_input = 1,
  bound_exhausted = 2,
  invariant_violation = 3,
  relative_dimension = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const = 0;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::invalid_input; }
};

// Malformed JSON or unreadable file.
class ParseError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Well-formed JSON that does not follow the document layout.
class SchemaError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Structurally fine input that violates the complex/morphism axioms.
class ValidationError : public InvalidInput {
 public:
  ValidationError(const std::string& what, std::vector<std::string> issues)
      : InvalidInput(what), issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

class BoundExhausted : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::bound_exhausted; }
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::invariant_violation; }
};

class RelativeDimensionTooLarge : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::relative_dimension; }
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

}  // namespace ssr
