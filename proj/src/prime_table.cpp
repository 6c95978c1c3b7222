#include "primestrings/prime_table.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numeric>
#include <string>

#include "primestrings/error.hpp"
#include "primestrings/parallel.hpp"
#include "primestrings/primality.hpp"

namespace primestrings {
namespace {

constexpr std::array<char, 4> kCacheMagic{'S', 'P', 'C', '1'};
constexpr std::uint32_t kCacheVersion = 1;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Odd primes p <= bound, by a plain sieve.
std::vector<std::uint32_t> odd_base_primes(std::uint64_t bound) {
  std::vector<std::uint32_t> out;
  if (bound < 3) return out;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t i = 3; i * i <= bound; i += 2) {
    if (composite[i]) continue;
    for (std::uint64_t j = i * i; j <= bound; j += 2 * i) composite[j] = true;
  }
  for (std::uint64_t i = 3; i <= bound; i += 2) {
    if (!composite[i]) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

// Sets the composite bit for every odd n = 2j+3 with j in [j0, j1) that has an
// odd prime factor p < n. bits[0] bit 0 corresponds to j0.
void mark_composites(std::uint8_t* bits, std::uint64_t j0, std::uint64_t j1,
                     std::span<const std::uint32_t> base_primes) {
  const std::uint64_t n_hi = 2 * j1 + 3;  // exclusive
  for (std::uint32_t p32 : base_primes) {
    const std::uint64_t p = p32;
    if (p * p >= n_hi) break;
    const std::uint64_t n_lo = 2 * j0 + 3;
    std::uint64_t start = std::max(p * p, (n_lo + p - 1) / p * p);
    if ((start & 1) == 0) start += p;
    for (std::uint64_t j = (start - 3) / 2 - j0; j < j1 - j0; j += p) {
      bits[j >> 3] |= static_cast<std::uint8_t>(1u << (j & 7));
    }
  }
}

void check_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options) {
  if (lo > hi) {
    throw Error(ErrorCode::invalid_range,
                "lo=" + std::to_string(lo) + " exceeds hi=" + std::to_string(hi));
  }
  if (hi > options.max_hi) {
    throw Error(ErrorCode::range_too_large, "hi=" + std::to_string(hi) + " exceeds configured maximum " +
                                                std::to_string(options.max_hi));
  }
}

std::uint64_t integers_per_segment(const SieveOptions& options) {
  return std::max<std::uint64_t>(options.segment_bytes, 1) * 16;
}

// Primes of [lo, hi) for a window small enough to hold in one buffer.
void sieve_window(std::uint64_t lo, std::uint64_t hi, std::span<const std::uint32_t> base_primes,
                  std::vector<std::uint8_t>& scratch, const std::function<void(std::uint64_t)>& emit) {
  if (lo <= 2 && hi > 2) emit(2);
  const std::uint64_t first_odd = std::max<std::uint64_t>(3, lo | 1);
  if (first_odd >= hi) return;
  const std::uint64_t j0 = (first_odd - 3) / 2;
  const std::uint64_t j1 = odd_bit_count(hi);
  scratch.assign((j1 - j0 + 7) / 8, 0);
  mark_composites(scratch.data(), j0, j1, base_primes);
  for (std::uint64_t j = 0; j < j1 - j0; ++j) {
    if (((scratch[j >> 3] >> (j & 7)) & 1) == 0) emit(2 * (j0 + j) + 3);
  }
}

void put_le(std::ostream& out, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) out.put(static_cast<char>((value >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t value = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw Error(ErrorCode::cache_format, "truncated header");
    value |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return value;
}

}  // namespace

PrimeTable PrimeTable::build(std::uint64_t limit, const SieveOptions& options) {
  if (limit < 2) throw Error(ErrorCode::invalid_range, "prime table limit must be >= 2");
  check_range(0, limit, options);

  const std::uint64_t nbits = odd_bit_count(limit);
  std::vector<std::uint8_t> bits((nbits + 7) / 8, 0);
  const auto base = odd_base_primes(isqrt(limit));

  const std::uint64_t seg_bits = std::max<std::size_t>(options.segment_bytes, 1) * 8;
  const std::size_t segments = static_cast<std::size_t>((nbits + seg_bits - 1) / seg_bits);
  // Segments start on byte boundaries, so workers never share a byte.
  parallel_for(segments, options.workers, [&](std::size_t s) {
    const std::uint64_t j0 = s * seg_bits;
    const std::uint64_t j1 = std::min(nbits, j0 + seg_bits);
    mark_composites(bits.data() + j0 / 8, j0, j1, base);
  });
  return PrimeTable(limit, options.segment_bytes, std::move(bits));
}

bool PrimeTable::is_prime(std::uint64_t n) const {
  if (n >= limit_) return miller_rabin_u64(n);
  if (n < 3) return n == 2;
  if ((n & 1) == 0) return false;
  const std::uint64_t j = (n - 3) >> 1;
  return ((bits_[j >> 3] >> (j & 7)) & 1) == 0;
}

std::vector<std::uint64_t> PrimeTable::primes(std::uint64_t lo, std::uint64_t hi) const {
  std::vector<std::uint64_t> out;
  for_each_prime(lo, hi, [&](std::uint64_t p) { out.push_back(p); });
  return out;
}

void PrimeTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::cache_format, "cannot write " + path.string());
  out.write(kCacheMagic.data(), kCacheMagic.size());
  put_le(out, kCacheVersion, 4);
  put_le(out, limit_, 8);
  out.write(reinterpret_cast<const char*>(bits_.data()), static_cast<std::streamsize>(bits_.size()));
  if (!out) throw Error(ErrorCode::cache_format, "short write to " + path.string());
}

PrimeTable PrimeTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::cache_format, "cannot open " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kCacheMagic) throw Error(ErrorCode::cache_format, "bad magic in " + path.string());
  const auto version = get_le(in, 4);
  if (version != kCacheVersion) {
    throw Error(ErrorCode::cache_format, "unsupported cache version " + std::to_string(version));
  }
  const std::uint64_t limit = get_le(in, 8);
  if (limit < 2) throw Error(ErrorCode::cache_format, "limit < 2");
  const std::uint64_t nbytes = (odd_bit_count(limit) + 7) / 8;
  std::vector<std::uint8_t> bits(nbytes);
  in.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(nbytes));
  if (static_cast<std::uint64_t>(in.gcount()) != nbytes) {
    throw Error(ErrorCode::cache_format, "truncated bitmap in " + path.string());
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::cache_format, "trailing bytes in " + path.string());
  }
  return PrimeTable(limit, kDefaultSegmentBytes, std::move(bits));
}

std::vector<std::uint64_t> sieve_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options) {
  check_range(lo, hi, options);
  if (hi <= 2) return {};
  const auto base = odd_base_primes(isqrt(hi));
  const std::uint64_t span = integers_per_segment(options);
  const std::size_t segments = static_cast<std::size_t>((hi - lo + span - 1) / span);

  std::vector<std::vector<std::uint64_t>> parts(segments);
  parallel_for(segments, options.workers, [&](std::size_t s) {
    const std::uint64_t a = lo + s * span;
    const std::uint64_t b = std::min(hi, a + span);
    std::vector<std::uint8_t> scratch;
    sieve_window(a, b, base, scratch, [&](std::uint64_t p) { parts[s].push_back(p); });
  });

  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<std::uint64_t> out;
  out.reserve(total);
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

void for_each_prime_in_range(std::uint64_t lo, std::uint64_t hi, const std::function<void(std::uint64_t)>& fn,
                             const SieveOptions& options) {
  check_range(lo, hi, options);
  if (hi <= 2) return;
  const auto base = odd_base_primes(isqrt(hi));
  const std::uint64_t span = integers_per_segment(options);
  std::vector<std::uint8_t> scratch;
  for (std::uint64_t a = lo; a < hi; a += std::min(span, hi - a)) {
    sieve_window(a, std::min(hi, a + span), base, scratch, fn);
  }
}

bool is_prime(std::uint64_t n) { return miller_rabin_u64(n); }

std::uint64_t APCount::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

APCount count_primes_ap(std::uint64_t X, std::uint64_t q, const SieveOptions& options) {
  if (q == 0) throw Error(ErrorCode::invalid_modulus, "modulus q must be >= 1");
  if (X < 2) throw Error(ErrorCode::invalid_range, "X must be >= 2");
  if (X == UINT64_MAX) throw Error(ErrorCode::range_too_large, "X too large");
  APCount result{X, q, std::vector<std::uint64_t>(q, 0)};
  for_each_prime_in_range(0, X + 1, [&](std::uint64_t p) { ++result.counts[p % q]; }, options);
  return result;
}

std::filesystem::path PrimeCache::default_directory() {
  if (const char* dir = std::getenv("PRIMES_CACHE_DIR"); dir != nullptr && *dir != '\0') return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg != nullptr && *xdg != '\0') {
    return std::filesystem::path(xdg) / "primestrings";
  }
  if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
    return std::filesystem::path(home) / ".cache" / "primestrings";
  }
  return std::filesystem::temp_directory_path() / "primestrings-cache";
}

std::filesystem::path PrimeCache::file_for(std::uint64_t limit) const {
  return *directory_ / ("primes-" + std::to_string(limit) + ".spc");
}

PrimeTable PrimeCache::obtain(std::uint64_t limit, const SieveOptions& options) const {
  if (!enabled()) return PrimeTable::build(limit, options);

  const auto path = file_for(limit);
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    try {
      auto table = PrimeTable::load(path);
      if (table.limit() == limit) return table;
    } catch (const Error&) {
      // unreadable cache: rebuild below
    }
  }
  auto table = PrimeTable::build(limit, options);
  std::filesystem::create_directories(*directory_, ec);
  if (!ec) {
    const auto tmp = path.string() + ".tmp";
    try {
      table.save(tmp);
      std::filesystem::rename(tmp, path, ec);
    } catch (const Error&) {
      std::filesystem::remove(tmp, ec);
    }
  }
  return table;
}

}  // namespace primestrings
