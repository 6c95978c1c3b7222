// Special prime sets: the primes inside a monotone integer sequence floor(f(n)).
//
//   AllPrimes        carrier = every integer
//   Beatty(alpha)    carrier = { floor(n * alpha) : n >= 1 },  alpha > 1
//   FloorProduct(g)  carrier = { floor(n * g(n)) : n >= start_n }, values < 2 skipped
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "primestrings/fixed_point.hpp"
#include "primestrings/prime_table.hpp"

namespace primestrings {

// ---------------------------------------------------------------------------
// g families

struct LogLogPow {
  double B = 1.0;  // g(x) = (log log x)^B
};

struct LogPow {
  double B = 1.0;  // g(x) = (log x)^B
};

struct CustomG {
  std::string name = "custom";
  std::function<double(double)> g;
  std::function<double(double)> d1;  // g'
  std::function<double(double)> d2;  // g''
};

class GFamily {
 public:
  using Family = std::variant<LogLogPow, LogPow, CustomG>;

  // domain_start c defaults to the smallest point with g(c) >= 2 for the
  // built-in families; Custom requires it explicitly.
  explicit GFamily(Family family, std::optional<double> domain_start = std::nullopt);

  static GFamily loglog(double B = 1.0) { return GFamily(LogLogPow{B}); }
  static GFamily logpow(double B = 1.0) { return GFamily(LogPow{B}); }

  const Family& family() const noexcept { return family_; }
  double domain_start() const noexcept { return domain_start_; }
  bool analytic() const noexcept { return !std::holds_alternative<CustomG>(family_); }
  std::string name() const;

  // g^(order)(x) for order 0..3. Built-in families are analytic; Custom
  // uses its evaluators for orders 0..2 and a central difference of g'' with
  // relative step 1e-5 for order 3.
  double derivative(double x, int order) const;
  double operator()(double x) const { return derivative(x, 0); }

  // Smallest integer n >= 1 at which g is defined and positive.
  std::uint64_t natural_start() const;

  bool defined_at(double x) const;

  // floor(n * g(n)). Built-in families break near-integer ties with MPFR.
  std::int64_t floor_product(std::uint64_t n) const;

 private:
  Family family_;
  double domain_start_;
};

// ---------------------------------------------------------------------------
// set descriptors

struct AllPrimes {};

struct Beatty {
  std::shared_ptr<const BeattyArithmetic> arithmetic;

  explicit Beatty(IrrationalConstant alpha)
      : arithmetic(std::make_shared<const BeattyArithmetic>(std::move(alpha))) {}
  const IrrationalConstant& alpha() const { return arithmetic->constant(); }
};

struct FloorProduct {
  GFamily g;
  std::uint64_t start_n;

  explicit FloorProduct(GFamily family, std::optional<std::uint64_t> start = std::nullopt);
};

class SpecialSetSpec {
 public:
  using Variant = std::variant<AllPrimes, Beatty, FloorProduct>;

  SpecialSetSpec() : variant_(AllPrimes{}) {}
  SpecialSetSpec(Variant v) : variant_(std::move(v)) {}  // NOLINT(google-explicit-constructor)

  static SpecialSetSpec all_primes() { return SpecialSetSpec(AllPrimes{}); }
  static SpecialSetSpec beatty(std::string_view constant_name);
  static SpecialSetSpec floor_product(GFamily g) { return SpecialSetSpec(FloorProduct(std::move(g))); }

  // Parses "all", "beatty:<const>", "beatty:<decimal digits>", "floorprod:loglog",
  // "floorprod:loglog^<B>", "floorprod:log^<B>".
  static SpecialSetSpec parse(std::string_view text);

  const Variant& variant() const noexcept { return variant_; }
  std::string label() const;

  // Is m an element of the carrier sequence?
  bool contains(std::uint64_t m) const;

 private:
  Variant variant_;
};

// ---------------------------------------------------------------------------
// operations

// True iff floor(n * alpha) = m for some n >= 1 (interval criterion on
// [m/alpha, (m+1)/alpha)). Requires m >= 1.
bool beatty_member(const BeattyArithmetic& alpha, std::uint64_t m);
bool beatty_member(const IrrationalConstant& alpha, std::uint64_t m);

// Distinct carrier values in [lo, hi), increasing.
std::vector<std::uint64_t> enumerate_special(const SpecialSetSpec& spec, std::uint64_t lo, std::uint64_t hi);

// Streams carrier values in [lo, hi) in increasing order.
void for_each_element(const SpecialSetSpec& spec, std::uint64_t lo, std::uint64_t hi,
                      const std::function<void(std::uint64_t)>& fn);

// Primes of the set in [lo, hi), increasing. Primality comes from the table
// below its limit and deterministic Miller-Rabin above.
std::vector<std::uint64_t> special_primes(const SpecialSetSpec& spec, std::uint64_t lo, std::uint64_t hi,
                                          const PrimeTable& table);

void for_each_special_prime(const SpecialSetSpec& spec, std::uint64_t lo, std::uint64_t hi,
                            const PrimeTable& table, const std::function<void(std::uint64_t)>& fn);

// ---------------------------------------------------------------------------
// validate_g

inline constexpr double kAlphaTolerance = 0.05;

struct AlphaEstimates {
  std::array<double, 3> value{};  // alpha_1, alpha_2, alpha_3
};

struct ConditionFlags {
  bool alpha1_positive = false;
  bool alpha2_nonnegative = false;
  bool alpha1_ne_alpha2 = false;
  bool alpha3_ne_3alpha1 = false;
  bool combo_ne = false;  // 2 alpha_1 + alpha_3 != 3 alpha_2
};

ConditionFlags flags_from(const AlphaEstimates& estimates, double tolerance = kAlphaTolerance);

struct AlphaFit {
  // alpha_i(x) at every grid point, [i][point]
  std::array<std::vector<double>, 3> samples;
  AlphaEstimates raw;    // at the largest grid point
  AlphaEstimates limit;  // intercept of alpha_i(x) regressed on 1/log x
  ConditionFlags flags;  // from `limit`
};

struct AlphaReport {
  std::string family;
  std::vector<double> grid;
  double tolerance = kAlphaTolerance;
  AlphaFit relative_to_g;  // x g^(i) / g^(i-1) + i
  AlphaFit relative_to_f;  // x f^(i) / f^(i-1), f = x g

  bool increasing_unbounded = false;  // g' > 0 on the grid and g grows across it
  bool convexity = false;             // 2 g' + x g'' > 0 on the grid
  bool log_growth_evaluable = false;  // >= 2 grid points with log log log log x > 0
  bool log_growth = false;            // ratio log g / (L2 L4 / L3) decreasing on the grid
  std::vector<double> log_growth_ratio;
};

AlphaReport validate_g(const GFamily& g, const std::vector<double>& grid, double tolerance = kAlphaTolerance);

}  // namespace primestrings
