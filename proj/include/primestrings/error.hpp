#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace primestrings {

enum class ErrorCode {
  invalid_range,
  range_too_large,
  invalid_modulus,
  cache_format,
  precision_exhausted,
  domain_error,
  derivative_unavailable,
  grid_too_small,
  invalid_query,
  parameter_domain,
  case_mismatch,
  negative_start,
  interval_too_large,
  range_exceeded,
  invalid_argument,
};

std::string_view error_code_name(ErrorCode code);

// All library failures surface as this exception; `code()` identifies the
// contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace primestrings
