// Reference implementations used only by the tests. Each one is deliberately
// naive and shares no code with the library.
#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> factor(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      out.push_back(d);
      n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Plain Eratosthenes over [0, n).
inline std::vector<bool> prime_flags(std::uint64_t n) {
  std::vector<bool> flags(n, true);
  for (std::uint64_t i = 0; i < std::min<std::uint64_t>(n, 2); ++i) flags[i] = false;
  for (std::uint64_t p = 2; p * p < n; ++p) {
    if (!flags[p]) continue;
    for (std::uint64_t m = p * p; m < n; m += p) flags[m] = false;
  }
  return flags;
}

// pi = 3 + F / 2^128 with F = 0x243F6A8885A308D3'13198A2E03707344 (truncated).
// Exact floor(n * pi) for n < 2^32 away from near-integers at that scale.
inline std::uint64_t floor_n_pi(std::uint64_t n) {
  constexpr std::uint64_t hi = 0x243F6A8885A308D3ull;
  constexpr std::uint64_t lo = 0x13198A2E03707344ull;
  const unsigned __int128 cross = static_cast<unsigned __int128>(n) * hi +
                                  ((static_cast<unsigned __int128>(n) * lo) >> 64);
  return 3 * n + static_cast<std::uint64_t>(cross >> 64);
}

inline std::set<std::uint64_t> beatty_pi_values(std::uint64_t below) {
  std::set<std::uint64_t> out;
  for (std::uint64_t n = 1;; ++n) {
    const auto v = floor_n_pi(n);
    if (v >= below) break;
    out.insert(v);
  }
  return out;
}

inline std::uint64_t count_S_q(std::uint64_t q, std::uint64_t z) {
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= z; ++n) {
    bool ok = true;
    for (auto p : factor(n)) ok = ok && p % q == 1;
    count += ok;
  }
  return count;
}

inline std::uint64_t count_psi(std::uint64_t x, std::uint64_t t) {
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= x; ++n) {
    bool ok = true;
    for (auto p : factor(n)) ok = ok && p < t;
    count += ok;
  }
  return count;
}

// Verifies that `primes` are consecutive members of the prime set restricted
// by `member`, all = a mod q, by re-testing every integer in the window.
template <typename Member>
bool consecutive_window(const std::vector<std::uint64_t>& primes, std::uint64_t q, std::uint64_t a,
                        Member&& member) {
  if (primes.empty()) return false;
  std::size_t next = 0;
  for (std::uint64_t m = primes.front(); m <= primes.back(); ++m) {
    if (!(member(m) && is_prime(m))) continue;
    if (next >= primes.size() || primes[next] != m || m % q != a % q) return false;
    ++next;
  }
  return next == primes.size();
}

}  // namespace oracle
