// Strings of consecutive set-primes in a residue class.
//
// "Consecutive" is taken in the set's own ordering p_A(1) < p_A(2) < ...
// The scan is split into fixed segments; each segment reports its maximal
// runs of primes = a (mod q) plus whether its first/last set-prime is in the
// class, and the ordered merge splices runs across segment boundaries. The
// result is therefore independent of the worker count.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "primestrings/prime_table.hpp"
#include "primestrings/special_sets.hpp"

namespace primestrings {

struct StringQuery {
  SpecialSetSpec spec;
  std::uint64_t k = 1;
  std::uint64_t q = 1;
  std::uint64_t a = 0;
  std::uint64_t limit = 0;  // primes strictly below

  // Throws Error{invalid_query} unless k >= 1, q >= 1 and gcd(a, q) = 1.
  void validate() const;
};

struct StringHit {
  std::uint64_t start_index = 0;  // number of set-primes preceding the string
  std::vector<std::uint64_t> primes;
  bool first_occurrence = false;
};

struct SearchResult {
  std::optional<StringHit> hit;
  std::uint64_t scanned_to = 0;  // exclusive bound actually examined
};

// Maximal run of consecutive set-primes all = a (mod q).
struct Run {
  std::uint64_t start = 0;        // first prime of the run
  std::uint64_t length = 0;
  std::uint64_t start_index = 0;  // set-primes preceding it

  friend bool operator==(const Run&, const Run&) = default;
};

inline constexpr std::uint64_t kDefaultSegmentSpan = std::uint64_t{1} << 22;
inline constexpr std::uint64_t kProgressCadence = 10'000'000;

struct SearchOptions {
  unsigned workers = 1;  // 0 = machine parallelism
  std::uint64_t segment_span = kDefaultSegmentSpan;
  // Called with the number of integers scanned so far, every kProgressCadence.
  std::function<void(std::uint64_t)> progress;
};

SearchResult find_first_string(const StringQuery& query, const PrimeTable& table, const SearchOptions& options = {});

// Every maximal run below query.limit, ordered by start. query.k is ignored.
std::vector<Run> scan_all_strings(const StringQuery& query, const PrimeTable& table,
                                  const SearchOptions& options = {});

struct ResidueCensus {
  std::uint64_t X = 0;
  std::uint64_t q = 1;
  std::vector<std::uint64_t> counts;  // #{p in set, p <= X, p = r mod q} for r = 0..q-1
  std::uint64_t total = 0;
  std::uint64_t phi_q = 0;
  double coprime_mean = 0;  // mean count over classes coprime to q
  double max_ratio = 0;     // max coprime count / mean
  double min_ratio = 0;     // min coprime count / mean
};

ResidueCensus residue_census(const SpecialSetSpec& spec, std::uint64_t X, std::uint64_t q, const PrimeTable& table,
                             const SearchOptions& options = {});

std::uint64_t euler_phi(std::uint64_t n);

}  // namespace primestrings
