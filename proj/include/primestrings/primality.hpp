#pragma once

#include <cstdint>

#include <gmpxx.h>

namespace primestrings {

// Deterministic Miller-Rabin; the base set {2,...,37} is exact for all n < 2^64.
bool miller_rabin_u64(std::uint64_t n);

// Number of Miller-Rabin rounds used above 64 bits.
inline constexpr int kProbablePrimeRounds = 40;

struct PrimalityVerdict {
  bool prime = false;
  bool probabilistic = false;  // true when n >= 2^64 and the test was probable-prime
};

PrimalityVerdict is_prime_big(const mpz_class& n);

}  // namespace primestrings
