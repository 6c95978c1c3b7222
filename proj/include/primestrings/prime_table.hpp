// Segmented sieve of Eratosthenes over odd integers.
//
// Bitmap encoding (shared with the on-disk cache):
//   bit j (LSB-first within each byte)  <->  odd number 2j + 3
//   bit set                             <->  composite
// 2 is implicit. Bits for numbers >= limit are kept clear.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace primestrings {

inline constexpr std::size_t kDefaultSegmentBytes = 256 * 1024;
inline constexpr std::uint64_t kDefaultSieveMax = std::uint64_t{1} << 42;

struct SieveOptions {
  std::size_t segment_bytes = kDefaultSegmentBytes;
  unsigned workers = 1;  // 0 = machine parallelism
  std::uint64_t max_hi = kDefaultSieveMax;
};

class PrimeTable {
 public:
  // Sieves [0, limit). limit must be >= 2.
  static PrimeTable build(std::uint64_t limit, const SieveOptions& options = {});

  // Reads an "SPC1" cache file. Throws Error{cache_format} on any mismatch.
  static PrimeTable load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::uint64_t limit() const noexcept { return limit_; }
  std::size_t segment_bytes() const noexcept { return segment_bytes_; }
  std::span<const std::uint8_t> bitmap() const noexcept { return bits_; }

  bool covers(std::uint64_t n) const noexcept { return n < limit_; }

  // Table lookup below limit, deterministic Miller-Rabin above.
  bool is_prime(std::uint64_t n) const;

  // Primes in [lo, min(hi, limit)), ascending.
  std::vector<std::uint64_t> primes(std::uint64_t lo, std::uint64_t hi) const;

  template <typename Fn>
  void for_each_prime(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
    if (hi > limit_) hi = limit_;
    if (lo < 2) lo = 2;
    if (lo >= hi) return;
    if (lo == 2) {
      fn(std::uint64_t{2});
      lo = 3;
    }
    for (std::uint64_t n = lo | 1; n < hi; n += 2) {
      const std::uint64_t j = (n - 3) >> 1;
      if (((bits_[j >> 3] >> (j & 7)) & 1) == 0) fn(n);
    }
  }

  std::size_t memory_bytes() const noexcept { return bits_.size(); }

 private:
  PrimeTable(std::uint64_t limit, std::size_t segment_bytes, std::vector<std::uint8_t> bits)
      : limit_(limit), segment_bytes_(segment_bytes), bits_(std::move(bits)) {}

  std::uint64_t limit_;
  std::size_t segment_bytes_;
  std::vector<std::uint8_t> bits_;
};

// Number of bitmap bits needed for odd numbers 3 <= n < limit.
constexpr std::uint64_t odd_bit_count(std::uint64_t limit) noexcept {
  return limit < 3 ? 0 : (limit - 2) / 2;
}

// Primes p with lo <= p < hi in increasing order, independent of any table.
std::vector<std::uint64_t> sieve_range(std::uint64_t lo, std::uint64_t hi,
                                       const SieveOptions& options = {});

// Streams the primes of [lo, hi) to fn in increasing order (single thread).
void for_each_prime_in_range(std::uint64_t lo, std::uint64_t hi,
                             const std::function<void(std::uint64_t)>& fn,
                             const SieveOptions& options = {});

// Deterministic for every 64-bit input.
bool is_prime(std::uint64_t n);

// Exact per-residue prime counts #{p <= X : p = a mod q}.
struct APCount {
  std::uint64_t X = 0;
  std::uint64_t q = 1;
  std::vector<std::uint64_t> counts;  // indexed by residue 0..q-1

  std::uint64_t total() const;
};

APCount count_primes_ap(std::uint64_t X, std::uint64_t q, const SieveOptions& options = {});

// Opt-in persistence of PrimeTables keyed by limit. A missing or unreadable
// cache file is never an error: the table is rebuilt (and rewritten when
// writes are enabled).
class PrimeCache {
 public:
  PrimeCache() = default;  // disabled
  explicit PrimeCache(std::filesystem::path directory) : directory_(std::move(directory)) {}

  static std::filesystem::path default_directory();

  bool enabled() const noexcept { return directory_.has_value(); }
  std::filesystem::path file_for(std::uint64_t limit) const;

  PrimeTable obtain(std::uint64_t limit, const SieveOptions& options = {}) const;

 private:
  std::optional<std::filesystem::path> directory_;
};

}  // namespace primestrings
