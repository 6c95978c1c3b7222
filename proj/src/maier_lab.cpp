#include "primestrings/maier_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "primestrings/error.hpp"
#include "primestrings/parallel.hpp"
#include "primestrings/primality.hpp"
#include "primestrings/string_search.hpp"

namespace primestrings {
namespace {

mpz_class to_mpz(std::uint64_t v) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

bool fits_u64(const mpz_class& v) { return v >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64; }

std::uint64_t to_u64(const mpz_class& v) {
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

std::uint64_t mod_u64(const mpz_class& v, std::uint64_t m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), to_mpz(m).get_mpz_t());
  return to_u64(r);
}

void require_coprime(std::uint64_t a, std::uint64_t q) {
  if (q < 2) throw Error(ErrorCode::invalid_modulus, "q must be >= 2");
  if (std::gcd(a % q, q) != 1) {
    throw Error(ErrorCode::invalid_argument,
                "gcd(a, q) = gcd(" + std::to_string(a) + ", " + std::to_string(q) + ") must be 1");
  }
}

std::uint64_t checked_ceil(double v, const char* what) {
  if (!std::isfinite(v) || v >= 1.8e19) {
    throw Error(ErrorCode::parameter_domain, std::string(what) + " is not representable (" + std::to_string(v) + ")");
  }
  return static_cast<std::uint64_t>(std::ceil(v));
}

}  // namespace

// ---------------------------------------------------------------------------
// classification

std::string_view to_string(ResidueClass c) {
  switch (c) {
    case ResidueClass::A_plus: return "A_plus";
    case ResidueClass::A_minus: return "A_minus";
    case ResidueClass::both: return "both";
    case ResidueClass::other: return "other";
  }
  return "other";
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

ResidueClass classify_residue(std::uint64_t a, std::uint64_t q) {
  require_coprime(a, q);
  bool plus = true, minus = true;
  for (std::uint64_t p : prime_factors(q)) {
    plus = plus && a % p == 1 % p;
    minus = minus && a % p == p - 1;
  }
  if (plus && minus) return ResidueClass::both;
  if (plus) return ResidueClass::A_plus;
  if (minus) return ResidueClass::A_minus;
  return ResidueClass::other;
}

// ---------------------------------------------------------------------------
// model

double DModel::at(ScaleX X) const {
  if (kind == Kind::constant) return c;
  return c * std::log(X.log_x);
}

std::string DModel::describe() const {
  return kind == Kind::constant ? "const:" + std::to_string(c) : "loglog:" + std::to_string(c);
}

double EModel::log_F(ScaleX X) const {
  if (!inverse_of) return 0.0;  // E = X / log X  =>  F = 1
  const GFamily& g = *inverse_of;
  // s = log phi(X) solves s + log g(e^s) = log X; then log F = log X - s.
  auto log_g_at = [&](double s) -> double {
    if (const auto* p = std::get_if<LogLogPow>(&g.family())) return p->B * std::log(std::log(s));
    if (const auto* p = std::get_if<LogPow>(&g.family())) return p->B * std::log(s);
    if (s > 700) throw Error(ErrorCode::parameter_domain, "custom g cannot be evaluated at this scale");
    return std::log(g(std::exp(s)));
  };
  double s = X.log_x;
  for (int iter = 0; iter < 200; ++iter) {
    const double next = X.log_x - log_g_at(s);
    if (!std::isfinite(next)) throw Error(ErrorCode::parameter_domain, "f^-1(X) undefined at this X");
    if (std::fabs(next - s) < 1e-13 * std::max(1.0, std::fabs(s))) return X.log_x - next;
    s = next;
  }
  return X.log_x - s;
}

std::string EModel::describe() const { return inverse_of ? "phi/log:" + inverse_of->name() : "X/logX"; }

void WellDistModel::check(ScaleX X) const {
  if (X.log_x < std::log(16.0)) throw Error(ErrorCode::parameter_domain, "model requires X >= 16");
  const double D_val = D_at(X);
  if (!(D_val >= 1.0)) throw Error(ErrorCode::parameter_domain, "D(X) must be >= 1, got " + std::to_string(D_val));
  const double logF = E.log_F(X);
  if (!std::isfinite(logF)) throw Error(ErrorCode::parameter_domain, "E(X) must be positive");
}

std::optional<double> threshold_t(std::uint64_t y) {
  const double L1 = std::log(static_cast<double>(y));
  if (!(L1 > 0)) return std::nullopt;
  const double L2 = std::log(L1);
  if (!(L2 > 0)) return std::nullopt;
  const double L3 = std::log(L2);
  if (!(L3 > 0)) return std::nullopt;
  return std::exp(0.25 * L1 * L3 / L2);
}

std::uint64_t choose_p0(std::uint64_t y, std::uint64_t q) {
  const double log_y = std::log(static_cast<double>(y));
  auto p = static_cast<std::uint64_t>(std::floor(log_y)) + 1;
  for (;; ++p) {
    if (is_prime(p) && static_cast<double>(p) > log_y && q % p != 0) return p;
  }
}

MaierParams choose_parameters(ScaleX X, std::uint64_t q, const WellDistModel& model,
                              std::optional<std::uint64_t> y_override, ResidueClass residue_case) {
  if (q < 2) throw Error(ErrorCode::invalid_modulus, "q must be >= 2");
  if (y_override && *y_override < 7) throw Error(ErrorCode::parameter_domain, "y must be >= 7");
  model.check(X);

  const double D = model.D_at(X);
  const double logF = model.E.log_F(X);

  MaierParams params;
  params.y = y_override ? *y_override : checked_ceil(X.log_x / D, "y");
  if (params.y < 3) throw Error(ErrorCode::parameter_domain, "y = ceil(log X / D(X)) is below 3; enlarge X");
  params.z = checked_ceil(std::exp(3 * std::max(logF, std::log(D))), "z");
  params.t = threshold_t(params.y);
  params.p0 = choose_p0(params.y, q);
  if (!in_A_pm(residue_case) && !params.t) {
    throw Error(ErrorCode::parameter_domain, "t needs log log log y > 0, i.e. y > e^e ~ 15.15 (y = " +
                                                 std::to_string(params.y) + ")");
  }
  return params;
}

// ---------------------------------------------------------------------------
// Q

mpz_class MaierConfig::radical_cofactor() const {
  mpz_class r = 1;
  for (std::uint64_t p : P_a) r *= to_mpz(p);
  return r;
}

MaierConfig build_Q(std::uint64_t q, std::uint64_t a, const MaierParams& params,
                    std::optional<ResidueClass> expected_case) {
  const ResidueClass cls = classify_residue(a, q);
  if (expected_case && *expected_case != cls) {
    throw Error(ErrorCode::case_mismatch, "caller case " + std::string(to_string(*expected_case)) +
                                              " but classify_residue gives " + std::string(to_string(cls)));
  }
  if (!is_prime(params.p0)) throw Error(ErrorCode::invalid_argument, "p0=" + std::to_string(params.p0) + " is not prime");
  if (params.y < 2) throw Error(ErrorCode::parameter_domain, "y must be >= 2");

  MaierConfig config;
  config.q = q;
  config.a = a % q;
  config.y = params.y;
  config.p0 = params.p0;
  config.t = params.t;
  config.z = params.z;
  config.yz = params.yz();
  config.case_tag = cls;
  config.q_primes = prime_factors(q);

  auto excluded = [&](std::uint64_t p) { return p == params.p0 || q % p == 0; };
  std::vector<std::uint64_t> chosen;
  if (in_A_pm(cls)) {
    for (std::uint64_t p : sieve_range(2, params.y + 1)) {
      if (p % q != 1 % q && !excluded(p)) chosen.push_back(p);
    }
  } else {
    if (!params.t) throw Error(ErrorCode::parameter_domain, "case other requires t (y > e^e)");
    const double t = *params.t;
    const double yz_over_t = static_cast<double>(config.yz) / t;
    if (t > std::sqrt(static_cast<double>(config.yz))) {
      throw Error(ErrorCode::parameter_domain, "t exceeds sqrt(yz); enlarge z or y");
    }
    const auto top = static_cast<std::uint64_t>(std::floor(std::max(yz_over_t, static_cast<double>(params.y))));
    if (top > (std::uint64_t{1} << 36)) throw Error(ErrorCode::interval_too_large, "yz/t too large to enumerate");
    for (std::uint64_t p : sieve_range(2, top + 1)) {
      if (excluded(p)) continue;
      const std::uint64_t r = p % q;
      const auto pd = static_cast<double>(p);
      const bool small_other = p <= params.y && r != 1 % q && r != config.a;
      const bool large_one = pd >= t && p <= params.y && r == 1 % q;
      const bool class_a = pd <= yz_over_t && r == config.a;
      if (small_other || large_one || class_a) chosen.push_back(p);
    }
  }
  config.P_a = std::move(chosen);
  if (config.P_a.empty()) config.warnings.emplace_back("P_a is empty; Q = q");
  config.Q = to_mpz(q) * config.radical_cofactor();
  return config;
}

MaierConfig make_config(std::uint64_t q, std::uint64_t a, std::vector<std::uint64_t> primes) {
  MaierConfig config;
  config.case_tag = classify_residue(a, q);
  config.q = q;
  config.a = a % q;
  std::sort(primes.begin(), primes.end());
  if (std::adjacent_find(primes.begin(), primes.end()) != primes.end()) {
    throw Error(ErrorCode::invalid_argument, "primes must be distinct");
  }
  for (std::uint64_t p : primes) {
    if (!is_prime(p)) throw Error(ErrorCode::invalid_argument, std::to_string(p) + " is not prime");
    if (q % p == 0) throw Error(ErrorCode::invalid_argument, std::to_string(p) + " divides q");
  }
  config.P_a = std::move(primes);
  config.q_primes = prime_factors(q);
  config.Q = to_mpz(q) * config.radical_cofactor();
  return config;
}

mpq_class q_over_phi(const MaierConfig& config) {
  mpq_class ratio(to_mpz(config.q), to_mpz(euler_phi(config.q)));
  for (std::uint64_t p : config.P_a) ratio *= mpq_class(to_mpz(p), to_mpz(p - 1));
  ratio.canonicalize();
  return ratio;
}

// ---------------------------------------------------------------------------
// anchors and interval

mpz_class crt_anchor(const MaierConfig& config, AnchorSign sign) {
  const mpz_class R = config.radical_cofactor();
  const mpz_class q = to_mpz(config.q);
  mpz_class target = to_mpz(config.a) + (sign == AnchorSign::plus ? -1 : 1);
  mpz_fdiv_r(target.get_mpz_t(), target.get_mpz_t(), q.get_mpz_t());

  // x = R * k with R * k = target (mod q)
  mpz_class inverse;
  const mpz_class R_mod_q = R % q;
  if (mpz_invert(inverse.get_mpz_t(), R_mod_q.get_mpz_t(), q.get_mpz_t()) == 0) {
    throw Error(ErrorCode::invalid_argument, "rad(Q/q) must be coprime to q");
  }
  mpz_class k = (target * inverse) % q;
  if (k == 0) k = q;  // smallest positive solution
  return R * k;
}

mpz_class enlarge_minus_anchor(const MaierConfig& config, const mpz_class& n, std::uint64_t yz) {
  const mpz_class need = to_mpz(yz);
  if (n >= need) return n;
  const mpz_class step = config.radical_cofactor() * to_mpz(config.q);
  mpz_class multiples;
  mpz_cdiv_q(multiples.get_mpz_t(), mpz_class(need - n).get_mpz_t(), step.get_mpz_t());
  return n + multiples * step;
}

Interval build_interval(const MaierConfig& config, const mpz_class& m, const mpz_class& n, std::uint64_t yz) {
  switch (config.case_tag) {
    case ResidueClass::A_plus:
    case ResidueClass::both:
      return {m + 1, yz};
    case ResidueClass::A_minus: {
      if (n < to_mpz(yz)) {
        throw Error(ErrorCode::negative_start,
                    "n=" + n.get_str() + " < yz=" + std::to_string(yz) + "; enlarge n by a multiple of rad(Q/q)*q");
      }
      return {n - to_mpz(yz) + 1, yz};
    }
    case ResidueClass::other:
      return {1, yz};
  }
  return {1, yz};
}

// ---------------------------------------------------------------------------
// S and T

namespace {

// Marks offsets j in [0, length) with gcd(start + j, Q) > 1.
std::vector<std::uint8_t> shares_factor_with_Q(const MaierConfig& config, const Interval& interval) {
  std::vector<std::uint8_t> hit(interval.length, 0);
  auto mark = [&](std::uint64_t p) {
    const std::uint64_t r = mod_u64(interval.start, p);
    for (std::uint64_t j = (p - r) % p; j < interval.length; j += p) hit[j] = 1;
  };
  for (std::uint64_t p : config.P_a) mark(p);
  for (std::uint64_t p : config.q_primes) mark(p);
  return hit;
}

struct Column {
  std::uint64_t offset;
  bool good;
};

std::vector<Column> coprime_columns(const MaierConfig& config, const Interval& interval) {
  const auto hit = shares_factor_with_Q(config, interval);
  std::vector<Column> out;
  std::uint64_t r = mod_u64(interval.start, config.q);
  for (std::uint64_t j = 0; j < interval.length; ++j) {
    if (!hit[j]) out.push_back({j, r == config.a});
    if (++r == config.q) r = 0;
  }
  return out;
}

}  // namespace

STCount count_S_T(const MaierConfig& config, const Interval& interval, bool with_members) {
  if (interval.length > kMaxIntervalLength) {
    throw Error(ErrorCode::interval_too_large,
                "interval length " + std::to_string(interval.length) + " exceeds " + std::to_string(kMaxIntervalLength));
  }
  STCount out;
  for (const Column& c : coprime_columns(config, interval)) {
    (c.good ? out.S : out.T) += 1;
    if (with_members) (c.good ? out.S_members : out.T_members).push_back(interval.start + to_mpz(c.offset));
  }
  return out;
}

// ---------------------------------------------------------------------------
// row census

MaierCensus sample_rows_census(const MaierConfig& config, const Interval& interval, std::uint64_t rows,
                               const SpecialSetSpec& spec, const PrimeTable& table, const CensusOptions& options) {
  if (rows == 0) throw Error(ErrorCode::invalid_argument, "rows must be >= 1");
  if (interval.length > kMaxIntervalLength) {
    throw Error(ErrorCode::interval_too_large, "interval too large for row sampling");
  }
  const auto columns = coprime_columns(config, interval);
  const bool all_primes = std::holds_alternative<AllPrimes>(spec.variant());

  MaierCensus census;
  for (const Column& c : columns) (c.good ? census.S_count : census.T_count) += 1;
  census.rows_sampled = rows;
  census.per_row.resize(rows);

  std::vector<std::uint8_t> residue_ok(rows, 1), probabilistic(rows, 0);
  parallel_for(rows, options.workers, [&](std::size_t idx) {
    const std::uint64_t r = idx + 1;
    RowStats& row = census.per_row[idx];
    row.r = r;
    const mpz_class base = to_mpz(r) * config.Q + interval.start;
    const bool small = fits_u64(base + to_mpz(interval.length));
    const std::uint64_t base_u = small ? to_u64(base) : 0;

    std::uint64_t run = 0;
    for (const Column& c : columns) {
      bool prime = false;
      std::uint64_t residue = 0;
      if (small) {
        const std::uint64_t v = base_u + c.offset;
        if (!spec.contains(v)) continue;
        prime = table.is_prime(v);
        residue = v % config.q;
      } else {
        if (!all_primes) {
          throw Error(ErrorCode::range_exceeded, "row " + std::to_string(r) +
                                                     " exceeds 64 bits; only the all-primes set is supported there");
        }
        const mpz_class v = base + to_mpz(c.offset);
        const auto verdict = is_prime_big(v);
        prime = verdict.prime;
        probabilistic[idx] |= static_cast<std::uint8_t>(verdict.probabilistic);
        residue = mod_u64(v, config.q);
      }
      if (!prime) continue;

      // q | Q, so the value's class is fixed by its column.
      if (residue != mod_u64(interval.start + to_mpz(c.offset), config.q)) residue_ok[idx] = 0;
      const bool good = residue == config.a;
      if (good) {
        ++row.good;
        row.longest_good_run = std::max(row.longest_good_run, ++run);
      } else {
        ++row.bad;
        run = 0;
      }
      if (options.record_primes) (good ? row.good_primes : row.bad_primes).push_back(base + to_mpz(c.offset));
    }
  });

  for (std::size_t i = 0; i < rows; ++i) {
    const RowStats& row = census.per_row[i];
    census.good += row.good;
    census.bad += row.bad;
    census.max_good_run = std::max(census.max_good_run, row.longest_good_run);
    if (row.bad > 0) {
      ++census.rows_with_bad;
      census.case1_max_good_run = std::max(census.case1_max_good_run, row.longest_good_run);
    } else {
      census.case2_good_in_clean_rows += row.good;
      census.case2_max_good_run = std::max(census.case2_max_good_run, row.longest_good_run);
    }
    census.column_residue_ok = census.column_residue_ok && residue_ok[i];
    census.probabilistic_primality = census.probabilistic_primality || probabilistic[i];
  }
  return census;
}

// ---------------------------------------------------------------------------
// counting functions

namespace {

std::uint64_t count_products(const std::vector<std::uint64_t>& primes, std::size_t from, std::uint64_t bound) {
  // 1 (the empty product) plus every product whose smallest prime index is >= from.
  std::uint64_t total = 1;
  for (std::size_t j = from; j < primes.size() && primes[j] <= bound; ++j) {
    total += count_products(primes, j, bound / primes[j]);
  }
  return total;
}

std::uint64_t psi_recursive(std::uint64_t x, const std::vector<std::uint64_t>& primes, std::size_t count) {
  // Psi(x) over the first `count` primes: split on whether the largest prime divides n.
  while (count > 0 && primes[count - 1] > x) --count;
  if (count == 0 || x < 2) return x >= 1 ? 1 : 0;
  if (count == 1) {
    std::uint64_t n = 0;
    for (std::uint64_t v = x; v >= 1; v /= 2) ++n;
    return n;
  }
  return psi_recursive(x, primes, count - 1) + psi_recursive(x / primes[count - 1], primes, count);
}

}  // namespace

std::uint64_t count_S_q(std::uint64_t q, std::uint64_t z) {
  if (q < 2) throw Error(ErrorCode::invalid_modulus, "q must be >= 2");
  if (z == 0) return 0;
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p : sieve_range(2, z + 1)) {
    if (p % q == 1) primes.push_back(p);
  }
  return count_products(primes, 0, z);
}

std::uint64_t count_psi(std::uint64_t x, std::uint64_t t) {
  if (t < 2) throw Error(ErrorCode::invalid_argument, "t must be >= 2");
  if (x == 0) return 0;
  const auto primes = sieve_range(2, std::min(t, x + 1));
  return psi_recursive(x, primes, primes.size());
}

// ---------------------------------------------------------------------------
// bounds

LogScales LogScales::at(ScaleX X) {
  LogScales s;
  s.loglog_x = std::log(X.log_x);
  s.logloglog_x = std::log(s.loglog_x);
  s.loglogloglog_x = std::log(s.logloglog_x);
  return s;
}

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw Error(ErrorCode::domain_error, std::string(what) + " must be positive, got " + std::to_string(v));
  }
}

}  // namespace

double string_bound_pm(const LogScales& s, double log_max_DF, std::uint64_t phi_q) {
  require_positive(s.loglog_x, "log log X");
  require_positive(log_max_DF, "log max{D,F}");
  if (phi_q == 0) throw Error(ErrorCode::domain_error, "phi(q) must be positive");
  return std::pow(s.loglog_x / log_max_DF, 1.0 / static_cast<double>(phi_q));
}

double string_bound_other(const LogScales& s, double log_max_DF, std::uint64_t phi_q) {
  require_positive(s.loglog_x, "log log X");
  require_positive(s.logloglog_x, "log log log X");
  require_positive(s.loglogloglog_x, "log log log log X");
  require_positive(log_max_DF, "log max{D,F}");
  if (phi_q == 0) throw Error(ErrorCode::domain_error, "phi(q) must be positive");
  const double ratio = s.loglog_x * s.loglogloglog_x / (s.logloglog_x * log_max_DF);
  return std::pow(ratio, 1.0 / static_cast<double>(phi_q));
}

double case1_proxy(double log_y_or_t, double log_z, std::uint64_t phi_q) {
  require_positive(log_y_or_t, "log(y,t)");
  require_positive(log_z, "log z");
  if (phi_q == 0) throw Error(ErrorCode::domain_error, "phi(q) must be positive");
  return std::pow(log_y_or_t / log_z, 1.0 / static_cast<double>(phi_q));
}

StringBoundReport estimate_string_bound(const LogScales& scales, double log_max_DF, std::uint64_t q,
                                        ResidueClass residue_case, std::optional<double> log_y_or_t,
                                        std::optional<double> log_z) {
  const std::uint64_t phi = euler_phi(q);
  StringBoundReport report;
  auto attempt = [&](std::optional<double>& slot, auto&& fn) {
    try {
      slot = fn();
    } catch (const Error& e) {
      report.errors.emplace_back(e.what());
    }
  };
  attempt(report.bound_pm, [&] { return string_bound_pm(scales, log_max_DF, phi); });
  attempt(report.bound_other, [&] { return string_bound_other(scales, log_max_DF, phi); });
  report.selected = in_A_pm(residue_case) ? report.bound_pm : report.bound_other;
  if (log_y_or_t && log_z) attempt(report.case1_proxy, [&] { return case1_proxy(*log_y_or_t, *log_z, phi); });
  return report;
}

// ---------------------------------------------------------------------------
// pipeline

MaierRun run_maier(const MaierRequest& request, const PrimeTable& table) {
  const ResidueClass cls = classify_residue(request.a, request.q);
  MaierRun run;
  run.params = choose_parameters(request.X, request.q, request.model, request.y, cls);
  if (request.p0) {
    if (!is_prime(*request.p0) || request.q % *request.p0 == 0) {
      throw Error(ErrorCode::parameter_domain, "p0 must be a prime not dividing q");
    }
    run.params.p0 = *request.p0;
  }
  run.params.yz_override = request.yz;
  run.yz = run.params.yz();
  if (run.yz == 0) throw Error(ErrorCode::parameter_domain, "yz must be >= 1");

  run.config = build_Q(request.q, request.a, run.params, cls);
  run.m = crt_anchor(run.config, AnchorSign::plus);
  run.n = crt_anchor(run.config, AnchorSign::minus);
  if (cls == ResidueClass::A_minus) run.n = enlarge_minus_anchor(run.config, run.n, run.yz);
  run.interval = build_interval(run.config, run.m, run.n, run.yz);
  run.census = sample_rows_census(run.config, run.interval, request.rows, request.spec, table, request.census);

  const double D = request.model.D_at(request.X);
  const double logF = request.model.E.log_F(request.X);
  const double log_max_DF = std::max(std::log(D), logF);
  std::optional<double> log_yt;
  if (in_A_pm(cls)) {
    log_yt = std::log(static_cast<double>(run.params.y));
  } else if (run.params.t) {
    log_yt = std::log(*run.params.t);
  }
  run.bounds = estimate_string_bound(LogScales::at(request.X), log_max_DF, request.q, cls, log_yt,
                                     std::log(static_cast<double>(run.params.z)));
  return run;
}

}  // namespace primestrings
