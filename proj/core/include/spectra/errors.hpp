#pragma once

#include <stdexcept>
#include <string>

namespace spectra {

// Violated precondition or malformed input. CLI exit code 1.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public ContractError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ContractError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Request exceeds an exact-computation cap. CLI exit code 2.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A randomized pipeline stage could not produce its object. CLI exit code 3.
// `stage` names the step that gave up; `diagnostics` is a free-form JSON
// string the caller can persist next to the output.
class PipelineFailure : public std::runtime_error {
 public:
  PipelineFailure(std::string stage, const std::string& what, std::string diagnostics = "{}")
      : std::runtime_error(stage + ": " + what),
        stage_(std::move(stage)),
        diagnostics_(std::move(diagnostics)) {}
  const std::string& stage() const noexcept { return stage_; }
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string stage_;
  std::string diagnostics_;
};

}  // namespace spectra
