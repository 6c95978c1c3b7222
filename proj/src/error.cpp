#include "primestrings/error.hpp"

namespace primestrings {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_range: return "invalid-range";
    case ErrorCode::range_too_large: return "range-too-large";
    case ErrorCode::invalid_modulus: return "invalid-modulus";
    case ErrorCode::cache_format: return "cache-format";
    case ErrorCode::precision_exhausted: return "precision-exhausted";
    case ErrorCode::domain_error: return "domain-error";
    case ErrorCode::derivative_unavailable: return "derivative-unavailable";
    case ErrorCode::grid_too_small: return "grid-too-small";
    case ErrorCode::invalid_query: return "invalid-query";
    case ErrorCode::parameter_domain: return "parameter-domain";
    case ErrorCode::case_mismatch: return "case-mismatch";
    case ErrorCode::negative_start: return "negative-start";
    case ErrorCode::interval_too_large: return "interval-too-large";
    case ErrorCode::range_exceeded: return "range-exceeded";
    case ErrorCode::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace primestrings
