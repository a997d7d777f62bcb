#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cgrp {

enum class ErrorCode {
  kGenerationFailure,
  kUnsupportedOmega,
  kInvalidTour,
  kIllegalAction,
  kNotTerminal,
  kTooLarge,
  kShapeMismatch,
  kInvalidArgument,
  kParse,
};

/// Stable machine-readable name, used by the CLI error documents.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), _code(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return _code; }

 private:
  ErrorCode _code;
};

}  // namespace cgrp
