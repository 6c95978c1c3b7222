// Finite, exactly computed pieces of the Maier-matrix construction.
//
// The matrix has entries rQ + i for rows r = 1, 2, ... and columns i in an
// interval I of length yz. q | Q, so column i only holds numbers = i (mod q);
// "good" columns are those with i = a (mod q). Only columns coprime to Q can
// hold primes: S collects the good ones, T the rest.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "primestrings/prime_table.hpp"
#include "primestrings/special_sets.hpp"

namespace primestrings {

// ---------------------------------------------------------------------------
// residue classification

enum class ResidueClass { A_plus, A_minus, both, other };

std::string_view to_string(ResidueClass c);

// A_plus: a = 1 mod p for every prime p | q; A_minus: a = -1 mod p for every
// such p; both when the two coincide (q a power of two).
ResidueClass classify_residue(std::uint64_t a, std::uint64_t q);

inline bool in_A_pm(ResidueClass c) { return c != ResidueClass::other; }

std::vector<std::uint64_t> prime_factors(std::uint64_t n);

// ---------------------------------------------------------------------------
// well-distribution model and parameter choice

// X held in log space so very large scales stay representable.
struct ScaleX {
  double log_x = 0;
  static ScaleX from_value(double X) { return {std::log(X)}; }
};

struct DModel {
  enum class Kind { constant, loglog } kind = Kind::constant;
  double c = 1.0;  // D = c, or D = c * log log X

  double at(ScaleX X) const;
  std::string describe() const;
};

// E(X) = X / log X (all primes, Beatty sets) or phi(X) / log X with
// phi = f^-1, f(x) = x g(x) (floor-product sets).
struct EModel {
  std::optional<GFamily> inverse_of;  // empty: X / log X

  // log F(X) where F(X) = X / (E(X) log X).
  double log_F(ScaleX X) const;
  std::string describe() const;
};

struct WellDistModel {
  EModel E;
  DModel D;

  double D_at(ScaleX X) const { return D.at(X); }
  double F_at(ScaleX X) const { return std::exp(E.log_F(X)); }
  // Throws parameter_domain if E <= 0 or D < 1.
  void check(ScaleX X) const;
};

struct MaierParams {
  std::uint64_t y = 0;
  std::uint64_t p0 = 0;
  std::optional<double> t;  // undefined when log log log y <= 0
  std::uint64_t z = 1;
  std::optional<std::uint64_t> yz_override;  // explicit row length instead of y*z

  std::uint64_t yz() const { return yz_override.value_or(y * z); }
};

// t = exp(log y * logloglog y / (4 loglog y)); nullopt when logloglog y <= 0.
std::optional<double> threshold_t(std::uint64_t y);

// Smallest prime > log y not dividing q.
std::uint64_t choose_p0(std::uint64_t y, std::uint64_t q);

// z = ceil(max{F^3, D^3}), y = override or ceil(log X / D(X)). When the
// residue case needs t (case other) and t is undefined, throws parameter_domain.
MaierParams choose_parameters(ScaleX X, std::uint64_t q, const WellDistModel& model,
                              std::optional<std::uint64_t> y_override = std::nullopt,
                              ResidueClass residue_case = ResidueClass::other);

// ---------------------------------------------------------------------------
// Q and the matrix geometry

struct MaierConfig {
  std::uint64_t q = 0;
  std::uint64_t a = 0;
  std::uint64_t y = 0;
  std::uint64_t p0 = 0;
  std::optional<double> t;
  std::uint64_t z = 1;
  std::uint64_t yz = 0;
  ResidueClass case_tag = ResidueClass::other;
  std::vector<std::uint64_t> P_a;       // primes dividing Q/q, ascending
  std::vector<std::uint64_t> q_primes;  // prime factors of q
  mpz_class Q;
  bool exceptionality_verified = false;  // never checked; recorded as unverified
  std::vector<std::string> warnings;

  mpz_class radical_cofactor() const;  // product of P_a = rad(Q/q)
};

// Assembles P_a per the residue case and Q = q * prod(P_a).
MaierConfig build_Q(std::uint64_t q, std::uint64_t a, const MaierParams& params,
                    std::optional<ResidueClass> expected_case = std::nullopt);

// A config from an explicit prime list (Q = q * prod(primes)); primes must be
// distinct and coprime to q.
MaierConfig make_config(std::uint64_t q, std::uint64_t a, std::vector<std::uint64_t> primes);

// Q / phi(Q), exactly.
mpq_class q_over_phi(const MaierConfig& config);

enum class AnchorSign { plus, minus };

// Smallest positive x with x = 0 mod every p in P_a and x = a -+ 1 mod q.
mpz_class crt_anchor(const MaierConfig& config, AnchorSign sign);

// Adds the smallest multiple of rad(Q/q) * q to n making n >= yz.
mpz_class enlarge_minus_anchor(const MaierConfig& config, const mpz_class& n, std::uint64_t yz);

struct Interval {
  mpz_class start;  // first element
  std::uint64_t length = 0;
};

// A_plus (and both): {m+1..m+yz}; A_minus: {n-yz+1..n}; other: {1..yz}.
Interval build_interval(const MaierConfig& config, const mpz_class& m, const mpz_class& n, std::uint64_t yz);

inline constexpr std::uint64_t kMaxIntervalLength = 100'000'000;

struct STCount {
  std::uint64_t S = 0;
  std::uint64_t T = 0;
  std::vector<mpz_class> S_members;  // filled on request
  std::vector<mpz_class> T_members;
};

STCount count_S_T(const MaierConfig& config, const Interval& interval, bool with_members = false);

// ---------------------------------------------------------------------------
// row sampling

struct RowStats {
  std::uint64_t r = 0;
  std::uint64_t good = 0;
  std::uint64_t bad = 0;
  std::uint64_t longest_good_run = 0;
  std::vector<mpz_class> good_primes;  // filled when CensusOptions::record_primes
  std::vector<mpz_class> bad_primes;
};

struct MaierCensus {
  std::uint64_t S_count = 0;
  std::uint64_t T_count = 0;
  std::uint64_t rows_sampled = 0;
  std::vector<RowStats> per_row;  // sorted by r
  std::uint64_t good = 0;
  std::uint64_t bad = 0;
  std::uint64_t rows_with_bad = 0;
  std::uint64_t max_good_run = 0;
  std::uint64_t case1_max_good_run = 0;        // over rows containing bad primes
  std::uint64_t case2_good_in_clean_rows = 0;  // good primes in rows without bad primes
  std::uint64_t case2_max_good_run = 0;
  bool column_residue_ok = true;
  bool probabilistic_primality = false;  // some row value exceeded 64 bits
};

struct CensusOptions {
  unsigned workers = 1;
  bool record_primes = false;
};

MaierCensus sample_rows_census(const MaierConfig& config, const Interval& interval, std::uint64_t rows,
                               const SpecialSetSpec& spec, const PrimeTable& table,
                               const CensusOptions& options = {});

// ---------------------------------------------------------------------------
// counting functions

// #{n <= z : every prime factor of n is = 1 mod q}; n = 1 counts.
std::uint64_t count_S_q(std::uint64_t q, std::uint64_t z);

// #{n <= x : every prime factor of n is < t}; n = 1 counts.
std::uint64_t count_psi(std::uint64_t x, std::uint64_t t);

// ---------------------------------------------------------------------------
// string-length bound

struct LogScales {
  double loglog_x = 0;
  double logloglog_x = 0;
  double loglogloglog_x = 0;

  static LogScales at(ScaleX X);
};

inline constexpr std::string_view kPhiNote =
    "exponent evaluated with phi(q), not phi(Q)";

// (loglog X / log max{D,F})^(1/phi(q)). Throws domain_error on nonpositive logs.
double string_bound_pm(const LogScales& s, double log_max_DF, std::uint64_t phi_q);

// (loglog X * loglogloglog X / (logloglog X * log max{D,F}))^(1/phi(q)).
double string_bound_other(const LogScales& s, double log_max_DF, std::uint64_t phi_q);

// (log(y,t) / log z)^(1/phi(q)).
double case1_proxy(double log_y_or_t, double log_z, std::uint64_t phi_q);

struct StringBoundReport {
  std::optional<double> bound_pm;
  std::optional<double> bound_other;
  std::optional<double> selected;  // by residue case
  std::optional<double> case1_proxy;
  std::vector<std::string> errors;
  std::string note{kPhiNote};
};

StringBoundReport estimate_string_bound(const LogScales& scales, double log_max_DF, std::uint64_t q,
                                        ResidueClass residue_case, std::optional<double> log_y_or_t = std::nullopt,
                                        std::optional<double> log_z = std::nullopt);

// ---------------------------------------------------------------------------
// end-to-end run

struct MaierRequest {
  std::uint64_t q = 0;
  std::uint64_t a = 0;
  std::optional<std::uint64_t> y;
  std::optional<std::uint64_t> p0;
  std::optional<std::uint64_t> yz;
  std::uint64_t rows = 1000;
  SpecialSetSpec spec;
  ScaleX X{std::log(1e12)};
  WellDistModel model;
  CensusOptions census;
};

struct MaierRun {
  MaierParams params;
  MaierConfig config;
  std::uint64_t yz = 0;
  mpz_class m, n;
  Interval interval;
  MaierCensus census;
  StringBoundReport bounds;
};

MaierRun run_maier(const MaierRequest& request, const PrimeTable& table);

}  // namespace primestrings
