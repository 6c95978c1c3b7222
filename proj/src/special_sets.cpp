#include "primestrings/special_sets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include <mpfr.h>

#include "primestrings/error.hpp"

namespace primestrings {
namespace {

// Derivatives 0..3 of u -> u^B.
std::array<double, 4> power_derivatives(double u, double B) {
  return {std::pow(u, B), B * std::pow(u, B - 1), B * (B - 1) * std::pow(u, B - 2),
          B * (B - 1) * (B - 2) * std::pow(u, B - 3)};
}

// Given derivatives of h at log(x), returns derivatives of x -> h(log x).
std::array<double, 4> compose_log(const std::array<double, 4>& h, double x) {
  return {h[0], h[1] / x, (h[2] - h[1]) / (x * x), (h[3] - 3 * h[2] + 2 * h[1]) / (x * x * x)};
}

// RAII wrapper for a 256-bit MPFR value.
class Mpfr {
 public:
  Mpfr() { mpfr_init2(v_, 256); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

std::int64_t floor_product_mpfr(std::uint64_t n, bool loglog, double B) {
  Mpfr x, g, b;
  mpfr_set_ui(x.get(), n, MPFR_RNDN);
  mpfr_log(g.get(), x.get(), MPFR_RNDN);
  if (loglog) mpfr_log(g.get(), g.get(), MPFR_RNDN);
  if (B != 1.0) {
    mpfr_set_d(b.get(), B, MPFR_RNDN);
    mpfr_pow(g.get(), g.get(), b.get(), MPFR_RNDN);
  }
  mpfr_mul(g.get(), g.get(), x.get(), MPFR_RNDN);
  mpfr_floor(g.get(), g.get());
  return static_cast<std::int64_t>(mpfr_get_si(g.get(), MPFR_RNDN));
}

std::string format_B(double B) {
  std::string s = std::to_string(B);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

bool looks_numeric(std::string_view s) {
  return !s.empty() && (std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == '.');
}

double parse_exponent(std::string_view text, std::string_view whole) {
  try {
    std::size_t used = 0;
    const double B = std::stod(std::string(text), &used);
    if (used != text.size() || !(B > 0)) throw std::invalid_argument("bad");
    return B;
  } catch (const std::exception&) {
    throw Error(ErrorCode::invalid_argument, "bad exponent in set '" + std::string(whole) + "'");
  }
}

// Smallest n >= start with floor(f(n)) >= target; floors are nondecreasing in n.
std::uint64_t first_index_at_least(const FloorProduct& fp, std::int64_t target) {
  std::uint64_t lo = fp.start_n;
  if (fp.g.floor_product(lo) >= target) return lo;
  std::uint64_t step = 1;
  std::uint64_t hi = lo + step;
  while (fp.g.floor_product(hi) < target) {
    lo = hi;
    step *= 2;
    hi = lo + step;
  }
  // floor(f(lo)) < target <= floor(f(hi))
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (fp.g.floor_product(mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

// ---------------------------------------------------------------------------
// GFamily

GFamily::GFamily(Family family, std::optional<double> domain_start) : family_(std::move(family)) {
  if (const auto* p = std::get_if<LogLogPow>(&family_)) {
    if (!(p->B > 0)) throw Error(ErrorCode::invalid_argument, "LogLogPow exponent must be positive");
    domain_start_ = domain_start.value_or(std::exp(std::exp(std::pow(2.0, 1.0 / p->B))));
  } else if (const auto* p = std::get_if<LogPow>(&family_)) {
    if (!(p->B > 0)) throw Error(ErrorCode::invalid_argument, "LogPow exponent must be positive");
    domain_start_ = domain_start.value_or(std::exp(std::pow(2.0, 1.0 / p->B)));
  } else {
    const auto& c = std::get<CustomG>(family_);
    if (!c.g) throw Error(ErrorCode::invalid_argument, "custom g needs an evaluator");
    if (!domain_start) throw Error(ErrorCode::invalid_argument, "custom g needs an explicit domain start");
    domain_start_ = *domain_start;
  }
}

std::string GFamily::name() const {
  if (const auto* p = std::get_if<LogLogPow>(&family_)) {
    return p->B == 1.0 ? "loglog" : "loglog^" + format_B(p->B);
  }
  if (const auto* p = std::get_if<LogPow>(&family_)) return p->B == 1.0 ? "log" : "log^" + format_B(p->B);
  return std::get<CustomG>(family_).name;
}

bool GFamily::defined_at(double x) const {
  if (std::holds_alternative<LogLogPow>(family_)) return x > std::numbers::e;
  if (std::holds_alternative<LogPow>(family_)) return x > 1.0;
  const auto& c = std::get<CustomG>(family_);
  return x >= domain_start_ && std::isfinite(c.g(x));
}

double GFamily::derivative(double x, int order) const {
  if (order < 0 || order > 3) throw Error(ErrorCode::invalid_argument, "derivative order must be 0..3");
  if (const auto* p = std::get_if<LogLogPow>(&family_)) {
    const double L = std::log(x);
    const auto inner = compose_log(power_derivatives(std::log(L), p->B), L);
    return compose_log(inner, x)[order];
  }
  if (const auto* p = std::get_if<LogPow>(&family_)) {
    return compose_log(power_derivatives(std::log(x), p->B), x)[order];
  }
  const auto& c = std::get<CustomG>(family_);
  switch (order) {
    case 0:
      return c.g(x);
    case 1:
      if (!c.d1) throw Error(ErrorCode::derivative_unavailable, "custom g has no g' evaluator");
      return c.d1(x);
    case 2:
      if (!c.d2) throw Error(ErrorCode::derivative_unavailable, "custom g has no g'' evaluator");
      return c.d2(x);
    default: {
      if (!c.d2) throw Error(ErrorCode::derivative_unavailable, "custom g has no g'' evaluator");
      const double h = 1e-5 * x;
      return (c.d2(x + h) - c.d2(x - h)) / (2 * h);
    }
  }
}

std::uint64_t GFamily::natural_start() const {
  if (std::holds_alternative<LogLogPow>(family_)) return 3;
  if (std::holds_alternative<LogPow>(family_)) return 2;
  std::uint64_t n = static_cast<std::uint64_t>(std::max(1.0, std::ceil(domain_start_)));
  while (!(defined_at(static_cast<double>(n)) && derivative(static_cast<double>(n), 0) > 0)) {
    ++n;
    if (n > (1u << 20)) throw Error(ErrorCode::domain_error, "custom g never becomes positive");
  }
  return n;
}

std::int64_t GFamily::floor_product(std::uint64_t n) const {
  const long double x = static_cast<long double>(n);
  if (const auto* p = std::get_if<CustomG>(&family_)) {
    return static_cast<std::int64_t>(std::floor(static_cast<double>(n) * p->g(static_cast<double>(n))));
  }
  const bool is_loglog = std::holds_alternative<LogLogPow>(family_);
  const double B = is_loglog ? std::get<LogLogPow>(family_).B : std::get<LogPow>(family_).B;
  long double g = std::log(x);
  if (is_loglog) g = std::log(g);
  if (B != 1.0) g = std::pow(g, static_cast<long double>(B));
  const long double f = x * g;
  const long double nearest = std::round(f);
  const long double slack = 1e-9L + std::fabs(f) * 1e-15L;
  if (std::fabs(f - nearest) < slack) return floor_product_mpfr(n, is_loglog, B);
  return static_cast<std::int64_t>(std::floor(f));
}

// ---------------------------------------------------------------------------
// set descriptors

FloorProduct::FloorProduct(GFamily family, std::optional<std::uint64_t> start) : g(std::move(family)) {
  const std::uint64_t natural = g.natural_start();
  if (start && *start < natural) {
    throw Error(ErrorCode::domain_error, "start_n=" + std::to_string(*start) + " lies outside the domain of g=" +
                                             g.name() + " (first valid n is " + std::to_string(natural) + ")");
  }
  start_n = start.value_or(natural);
}

SpecialSetSpec SpecialSetSpec::beatty(std::string_view constant_name) {
  return SpecialSetSpec(Beatty(IrrationalConstant::named(constant_name)));
}

SpecialSetSpec SpecialSetSpec::parse(std::string_view text) {
  if (text == "all") return all_primes();
  if (text.starts_with("beatty:")) {
    const auto arg = text.substr(7);
    if (looks_numeric(arg)) {
      return SpecialSetSpec(Beatty(IrrationalConstant::from_decimal(std::string(arg), arg)));
    }
    return beatty(arg);
  }
  if (text.starts_with("floorprod:")) {
    const auto arg = text.substr(10);
    const auto caret = arg.find('^');
    const auto base = arg.substr(0, caret);
    const double B = caret == std::string_view::npos ? 1.0 : parse_exponent(arg.substr(caret + 1), text);
    if (base == "loglog") return floor_product(GFamily(LogLogPow{B}));
    if (base == "log") return floor_product(GFamily(LogPow{B}));
  }
  throw Error(ErrorCode::invalid_argument, "unknown set '" + std::string(text) +
                                               "' (expected all | beatty:<const> | floorprod:<family>)");
}

std::string SpecialSetSpec::label() const {
  if (std::holds_alternative<AllPrimes>(variant_)) return "all";
  if (const auto* b = std::get_if<Beatty>(&variant_)) return "beatty:" + b->alpha().name();
  return "floorprod:" + std::get<FloorProduct>(variant_).g.name();
}

bool SpecialSetSpec::contains(std::uint64_t m) const {
  if (std::holds_alternative<AllPrimes>(variant_)) return true;
  if (const auto* b = std::get_if<Beatty>(&variant_)) return m >= 1 && beatty_member(*b->arithmetic, m);
  const auto& fp = std::get<FloorProduct>(variant_);
  if (m < 2) return false;
  const auto target = static_cast<std::int64_t>(m);
  return fp.g.floor_product(first_index_at_least(fp, target)) == target;
}

// ---------------------------------------------------------------------------
// operations

bool beatty_member(const BeattyArithmetic& alpha, std::uint64_t m) {
  if (m == 0) throw Error(ErrorCode::domain_error, "beatty_member requires m >= 1");
  // [m/alpha, (m+1)/alpha) holds an integer iff floor((m+1)/alpha) > floor(m/alpha),
  // since m/alpha is never an integer for irrational alpha.
  return alpha.floor_div(m + 1) > alpha.floor_div(m);
}

bool beatty_member(const IrrationalConstant& alpha, std::uint64_t m) {
  return beatty_member(BeattyArithmetic(alpha), m);
}

void for_each_element(const SpecialSetSpec& spec, std::uint64_t lo, std::uint64_t hi,
                      const std::function<void(std::uint64_t)>& fn) {
  if (lo > hi) throw Error(ErrorCode::invalid_range, "lo exceeds hi");
  const auto& v = spec.variant();
  if (std::holds_alternative<AllPrimes>(v)) {
    for (std::uint64_t m = lo; m < hi; ++m) fn(m);
    return;
  }
  if (const auto* b = std::get_if<Beatty>(&v)) {
    const auto& arith = *b->arithmetic;
    std::uint64_t n = std::max<std::uint64_t>(1, arith.floor_div(lo));
    for (;; ++n) {
      const std::uint64_t value = arith.floor_mul(n);
      if (value >= hi) break;
      if (value >= lo) fn(value);
    }
    return;
  }
  const auto& fp = std::get<FloorProduct>(v);
  const std::uint64_t from = std::max<std::uint64_t>(lo, 2);
  if (from >= hi) return;
  std::int64_t previous = -1;
  for (std::uint64_t n = first_index_at_least(fp, static_cast<std::int64_t>(from));; ++n) {
    const std::int64_t value = fp.g.floor_product(n);
    if (value >= static_cast<std::int64_t>(hi)) break;
    if (value != previous) fn(static_cast<std::uint64_t>(value));
    previous = value;
  }
}

std::vector<std::uint64_t> enumerate_special(const SpecialSetSpec& spec, std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for_each_element(spec, lo, hi, [&](std::uint64_t m) { out.push_back(m); });
  return out;
}

void for_each_special_prime(const SpecialSetSpec& spec, std::uint64_t lo, std::uint64_t hi, const PrimeTable& table,
                            const std::function<void(std::uint64_t)>& fn) {
  if (lo > hi) throw Error(ErrorCode::invalid_range, "lo exceeds hi");
  if (std::holds_alternative<AllPrimes>(spec.variant())) {
    table.for_each_prime(lo, hi, fn);
    if (hi > table.limit()) for_each_prime_in_range(std::max(lo, table.limit()), hi, fn);
    return;
  }
  for_each_element(spec, lo, hi, [&](std::uint64_t m) {
    if (table.is_prime(m)) fn(m);
  });
}

std::vector<std::uint64_t> special_primes(const SpecialSetSpec& spec, std::uint64_t lo, std::uint64_t hi,
                                          const PrimeTable& table) {
  std::vector<std::uint64_t> out;
  for_each_special_prime(spec, lo, hi, table, [&](std::uint64_t p) { out.push_back(p); });
  return out;
}

// ---------------------------------------------------------------------------
// validate_g

ConditionFlags flags_from(const AlphaEstimates& e, double tolerance) {
  const auto [a1, a2, a3] = e.value;
  ConditionFlags f;
  f.alpha1_positive = a1 > tolerance;
  f.alpha2_nonnegative = a2 >= -tolerance;
  f.alpha1_ne_alpha2 = std::fabs(a1 - a2) > tolerance;
  f.alpha3_ne_3alpha1 = std::fabs(a3 - 3 * a1) > tolerance;
  f.combo_ne = std::fabs(2 * a1 + a3 - 3 * a2) > tolerance;
  return f;
}

namespace {

double intercept_against_inverse_log(const std::vector<double>& grid, const std::vector<double>& values) {
  const auto n = static_cast<double>(grid.size());
  double su = 0, sv = 0, suu = 0, suv = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double u = 1.0 / std::log(grid[j]);
    su += u;
    sv += values[j];
    suu += u * u;
    suv += u * values[j];
  }
  const double det = n * suu - su * su;
  if (det == 0) return values.back();
  return (suu * sv - su * suv) / det;
}

AlphaFit finish_fit(const std::vector<double>& grid, std::array<std::vector<double>, 3> samples, double tol) {
  AlphaFit fit;
  for (int i = 0; i < 3; ++i) {
    fit.raw.value[i] = samples[i].back();
    fit.limit.value[i] = intercept_against_inverse_log(grid, samples[i]);
  }
  fit.samples = std::move(samples);
  fit.flags = flags_from(fit.limit, tol);
  return fit;
}

}  // namespace

AlphaReport validate_g(const GFamily& g, const std::vector<double>& grid_in, double tolerance) {
  std::vector<double> grid = grid_in;
  std::sort(grid.begin(), grid.end());
  if (grid.size() < 5) throw Error(ErrorCode::grid_too_small, "need at least 5 grid points");
  if (!(grid.front() > 0) || grid.back() / grid.front() < 1000.0) {
    throw Error(ErrorCode::grid_too_small, "grid must span at least 3 decades");
  }
  if (grid.front() < g.domain_start()) {
    throw Error(ErrorCode::domain_error, "grid point " + std::to_string(grid.front()) +
                                             " lies below the domain start c=" + std::to_string(g.domain_start()));
  }

  AlphaReport report;
  report.family = g.name();
  report.grid = grid;
  report.tolerance = tolerance;

  std::array<std::vector<double>, 3> on_g, on_f;
  bool increasing = true;
  bool convex = true;
  for (double x : grid) {
    const std::array<double, 4> d{g.derivative(x, 0), g.derivative(x, 1), g.derivative(x, 2), g.derivative(x, 3)};
    const std::array<double, 4> f{x * d[0], d[0] + x * d[1], 2 * d[1] + x * d[2], 3 * d[2] + x * d[3]};
    for (int i = 1; i <= 3; ++i) {
      on_g[i - 1].push_back(x * d[i] / d[i - 1] + i);
      on_f[i - 1].push_back(x * f[i] / f[i - 1]);
    }
    increasing = increasing && d[1] > 0;
    convex = convex && (2 * d[1] + x * d[2] > 0);
  }
  report.relative_to_g = finish_fit(grid, std::move(on_g), tolerance);
  report.relative_to_f = finish_fit(grid, std::move(on_f), tolerance);
  report.increasing_unbounded = increasing && g(grid.back()) > g(grid.front());
  report.convexity = convex;

  for (double x : grid) {
    const double L2 = std::log(std::log(x));
    const double L3 = std::log(L2);
    const double L4 = L3 > 0 ? std::log(L3) : -1.0;
    if (L4 > 0) report.log_growth_ratio.push_back(std::log(g(x)) / (L2 * L4 / L3));
  }
  report.log_growth_evaluable = report.log_growth_ratio.size() >= 2;
  report.log_growth = report.log_growth_evaluable &&
                      report.log_growth_ratio.back() < report.log_growth_ratio.front();
  return report;
}

}  // namespace primestrings
