#include "primestrings/string_search.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "primestrings/error.hpp"
#include "primestrings/parallel.hpp"

namespace primestrings {
namespace {

struct SegmentRuns {
  std::uint64_t count = 0;  // set-primes in the segment
  std::vector<Run> runs;    // start_index local to the segment
  bool starts_good = false;
  bool ends_good = false;
};

SegmentRuns scan_segment(const StringQuery& query, const PrimeTable& table, std::uint64_t lo, std::uint64_t hi) {
  SegmentRuns seg;
  bool in_run = false;
  for_each_special_prime(query.spec, lo, hi, table, [&](std::uint64_t p) {
    const bool good = p % query.q == query.a;
    if (seg.count == 0) seg.starts_good = good;
    if (good) {
      if (in_run) {
        ++seg.runs.back().length;
      } else {
        seg.runs.push_back(Run{p, 1, seg.count});
        in_run = true;
      }
    } else {
      in_run = false;
    }
    ++seg.count;
  });
  seg.ends_good = in_run;
  return seg;
}

// Appends segments in order, splicing runs that cross a boundary.
class RunMerger {
 public:
  // Returns the index in runs() of the first run touched by this segment.
  std::size_t append(SegmentRuns&& seg) {
    const std::size_t first_touched = runs_.empty() ? 0 : runs_.size() - (open_ ? 1 : 0);
    if (seg.count == 0) return runs_.size();
    auto it = seg.runs.begin();
    if (open_ && seg.starts_good) {
      runs_.back().length += it->length;
      ++it;
    }
    for (; it != seg.runs.end(); ++it) {
      runs_.push_back(Run{it->start, it->length, it->start_index + seen_});
    }
    seen_ += seg.count;
    open_ = seg.ends_good;
    return first_touched;
  }

  const std::vector<Run>& runs() const noexcept { return runs_; }
  std::vector<Run> take() && { return std::move(runs_); }

 private:
  std::vector<Run> runs_;
  std::uint64_t seen_ = 0;
  bool open_ = false;
};

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

struct Segmentation {
  std::uint64_t span;
  std::size_t count;
  std::uint64_t lo(std::size_t s) const { return s * span; }
  std::uint64_t hi(std::size_t s, std::uint64_t limit) const { return std::min(limit, (s + 1) * span); }
};

Segmentation segment(std::uint64_t limit, const SearchOptions& options) {
  const std::uint64_t span = std::max<std::uint64_t>(options.segment_span, 1024);
  return {span, static_cast<std::size_t>((limit + span - 1) / span)};
}

void report_progress(const SearchOptions& options, std::uint64_t before, std::uint64_t after) {
  if (options.progress && after / kProgressCadence != before / kProgressCadence) options.progress(after);
}

}  // namespace

void StringQuery::validate() const {
  if (k == 0) throw Error(ErrorCode::invalid_query, "k must be >= 1");
  if (q == 0) throw Error(ErrorCode::invalid_query, "modulus q must be >= 1");
  if (a >= q && q > 1) throw Error(ErrorCode::invalid_query, "residue a must satisfy 0 <= a < q");
  if (gcd_u64(a % q, q) != 1) {
    throw Error(ErrorCode::invalid_query,
                "gcd(a, q) = gcd(" + std::to_string(a) + ", " + std::to_string(q) + ") must be 1");
  }
}

SearchResult find_first_string(const StringQuery& query, const PrimeTable& table, const SearchOptions& options) {
  query.validate();
  StringQuery normalized = query;
  normalized.a = query.a % query.q;

  const auto seg = segment(query.limit, options);
  const unsigned workers = resolve_workers(options.workers);
  RunMerger merger;
  std::optional<Run> found;

  for (std::size_t batch = 0; batch < seg.count && !found; batch += workers) {
    const std::size_t batch_size = std::min<std::size_t>(workers, seg.count - batch);
    std::vector<SegmentRuns> parts(batch_size);
    parallel_for(batch_size, workers, [&](std::size_t i) {
      const std::size_t s = batch + i;
      parts[i] = scan_segment(normalized, table, seg.lo(s), seg.hi(s, query.limit));
    });
    for (std::size_t i = 0; i < batch_size && !found; ++i) {
      const std::size_t s = batch + i;
      const std::size_t first = merger.append(std::move(parts[i]));
      const auto& runs = merger.runs();
      for (std::size_t r = first; r < runs.size(); ++r) {
        if (runs[r].length >= query.k) {
          found = runs[r];
          break;
        }
      }
      report_progress(options, seg.lo(s), seg.hi(s, query.limit));
    }
  }

  SearchResult result;
  result.scanned_to = query.limit;
  if (!found) return result;

  StringHit hit;
  hit.start_index = found->start_index;
  hit.first_occurrence = true;
  // The run's first k set-primes are consecutive and all in the class.
  const std::uint64_t k = query.k;
  std::uint64_t lo = found->start;
  while (hit.primes.size() < k) {
    const std::uint64_t hi = std::min(query.limit, lo + seg.span);
    for_each_special_prime(query.spec, lo, hi, table, [&](std::uint64_t p) {
      if (hit.primes.size() < k) hit.primes.push_back(p);
    });
    lo = hi;
  }
  result.hit = std::move(hit);
  return result;
}

std::vector<Run> scan_all_strings(const StringQuery& query, const PrimeTable& table, const SearchOptions& options) {
  query.validate();
  StringQuery normalized = query;
  normalized.a = query.a % query.q;

  const auto seg = segment(query.limit, options);
  std::vector<SegmentRuns> parts(seg.count);
  parallel_for(seg.count, options.workers, [&](std::size_t s) {
    parts[s] = scan_segment(normalized, table, seg.lo(s), seg.hi(s, query.limit));
  });
  RunMerger merger;
  for (std::size_t s = 0; s < seg.count; ++s) {
    merger.append(std::move(parts[s]));
    report_progress(options, seg.lo(s), seg.hi(s, query.limit));
  }
  return std::move(merger).take();
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) return 0;
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

ResidueCensus residue_census(const SpecialSetSpec& spec, std::uint64_t X, std::uint64_t q, const PrimeTable& table,
                             const SearchOptions& options) {
  if (q == 0) throw Error(ErrorCode::invalid_modulus, "modulus q must be >= 1");
  if (X < 2) throw Error(ErrorCode::invalid_range, "X must be >= 2");

  const std::uint64_t bound = X + 1;
  const auto seg = segment(bound, options);
  std::vector<std::vector<std::uint64_t>> parts(seg.count);
  parallel_for(seg.count, options.workers, [&](std::size_t s) {
    parts[s].assign(q, 0);
    for_each_special_prime(spec, seg.lo(s), seg.hi(s, bound), table, [&](std::uint64_t p) { ++parts[s][p % q]; });
  });

  ResidueCensus census;
  census.X = X;
  census.q = q;
  census.counts.assign(q, 0);
  for (const auto& part : parts) {
    for (std::uint64_t r = 0; r < q; ++r) census.counts[r] += part[r];
  }
  census.total = std::accumulate(census.counts.begin(), census.counts.end(), std::uint64_t{0});
  census.phi_q = euler_phi(q);

  std::uint64_t coprime_total = 0;
  std::uint64_t lo = UINT64_MAX, hi = 0;
  for (std::uint64_t r = 0; r < q; ++r) {
    if (std::gcd(r, q) != 1) continue;
    coprime_total += census.counts[r];
    lo = std::min(lo, census.counts[r]);
    hi = std::max(hi, census.counts[r]);
  }
  census.coprime_mean = static_cast<double>(coprime_total) / static_cast<double>(census.phi_q);
  if (census.coprime_mean > 0) {
    census.max_ratio = static_cast<double>(hi) / census.coprime_mean;
    census.min_ratio = static_cast<double>(lo) / census.coprime_mean;
  }
  return census;
}

}  // namespace primestrings
