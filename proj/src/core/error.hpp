#pragma once

#include <stdexcept>
#include <string>

namespace kelvin {

// Stable error categories. The C API maps these one-to-one onto kv_status.
enum class ErrorCode {
  kParse,
  kUnknownLabel,
  kSpaceMismatch,
  kMassNotConserved,
  kInvalidArgument,
  kNotKelvinPlanck,
  kDurationMismatch,
  kOffGrid,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kelvin
