#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace primestrings::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotFound = 3;
inline constexpr int kExitRuntime = 4;

inline constexpr std::string_view kToolVersion = "0.3.0";

// Runs one command line (args excludes the program name). Results go to
// `out`; diagnostics and progress go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Integer flag values: plain digits or scientific notation ("3e7"); fractional
// values are rejected. Throws UsageError naming the flag.
std::uint64_t parse_count(std::string_view flag, std::string_view text);

struct UsageError {
  std::string message;
};

}  // namespace primestrings::cli
