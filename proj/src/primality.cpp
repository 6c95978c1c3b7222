#include "primestrings/primality.hpp"

#include <array>

namespace primestrings {
namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool strong_probable_prime(std::uint64_t n, std::uint64_t d, int s, std::uint64_t base) {
  std::uint64_t x = powmod(base, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool miller_rabin_u64(std::uint64_t n) {
  constexpr std::array<std::uint64_t, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (n < 2) return false;
  for (std::uint64_t p : bases) {
    if (n % p == 0) return n == p;
  }
  if (n < 37 * 37) return true;

  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : bases) {
    if (!strong_probable_prime(n, d, s, a)) return false;
  }
  return true;
}

PrimalityVerdict is_prime_big(const mpz_class& n) {
  if (n < 0) return {};
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
    std::uint64_t v = 0;
    mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, n.get_mpz_t());
    return {miller_rabin_u64(v), false};
  }
  const int r = mpz_probab_prime_p(n.get_mpz_t(), kProbablePrimeRounds);
  return {r != 0, true};
}

}  // namespace primestrings
