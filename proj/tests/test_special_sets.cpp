#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "primestrings/error.hpp"
#include "primestrings/special_sets.hpp"

using namespace primestrings;

TEST_CASE("Beatty pi primes below 100") {
  const auto table = PrimeTable::build(1000);
  const auto spec = SpecialSetSpec::beatty("pi");
  CHECK(special_primes(spec, 1, 100, table) == std::vector<std::uint64_t>{3, 31, 37, 43, 47, 53, 59, 97});
  CHECK(spec.label() == "beatty:pi");
}

TEST_CASE("beatty_member matches enumeration of floor(n pi)") {
  const auto values = oracle::beatty_pi_values(200'001);
  const BeattyArithmetic pi(IrrationalConstant::named("pi"));
  for (std::uint64_t m = 1; m <= 200'000; ++m) REQUIRE(beatty_member(pi, m) == (values.count(m) == 1));
  CHECK_THROWS_AS(beatty_member(pi, 0), Error);

  const auto listed = enumerate_special(SpecialSetSpec::beatty("pi"), 1000, 5000);
  CHECK(listed == std::vector<std::uint64_t>(values.lower_bound(1000), values.lower_bound(5000)));
}

TEST_CASE("sqrt2 and e Beatty sequences") {
  const auto sqrt2 = SpecialSetSpec::beatty("sqrt2");
  CHECK(enumerate_special(sqrt2, 1, 12) == std::vector<std::uint64_t>{1, 2, 4, 5, 7, 8, 9, 11});
  const auto e = SpecialSetSpec::beatty("e");
  CHECK(enumerate_special(e, 1, 20) == std::vector<std::uint64_t>{2, 5, 8, 10, 13, 16, 19});
}

TEST_CASE("parse") {
  CHECK(SpecialSetSpec::parse("all").label() == "all");
  CHECK(SpecialSetSpec::parse("beatty:e").label() == "beatty:e");
  CHECK(SpecialSetSpec::parse("floorprod:loglog").label() == "floorprod:loglog");
  CHECK(SpecialSetSpec::parse("floorprod:log^2").label() == "floorprod:log^2");
  CHECK(std::holds_alternative<Beatty>(
      SpecialSetSpec::parse("beatty:1.6180339887498948482045868343656381177203091798057").variant()));
  CHECK_THROWS_AS(SpecialSetSpec::parse("beatty:tau"), Error);
  CHECK_THROWS_AS(SpecialSetSpec::parse("squares"), Error);
  CHECK_THROWS_AS(SpecialSetSpec::parse("floorprod:sin"), Error);
}

TEST_CASE("analytic derivatives agree with finite differences") {
  for (const auto& g : {GFamily::loglog(), GFamily::loglog(2.0), GFamily::logpow(), GFamily::logpow(1.5)}) {
    for (double x : {1e4, 3e5, 1e8}) {
      for (int order = 1; order <= 3; ++order) {
        const double h = x * 1e-4;
        const double fd = (g.derivative(x + h, order - 1) - g.derivative(x - h, order - 1)) / (2 * h);
        CHECK_MESSAGE(g.derivative(x, order) == doctest::Approx(fd).epsilon(1e-5), g.name(), " x=", x,
                      " order=", order);
      }
    }
  }
}

TEST_CASE("custom g") {
  CustomG custom{"sqrtlog", [](double x) { return std::sqrt(std::log(x)); }, {}, {}};
  CHECK_THROWS_AS(GFamily{custom}, Error);
  const GFamily g(custom, 100.0);
  CHECK(g(100.0) == doctest::Approx(std::sqrt(std::log(100.0))));
  CHECK_THROWS_AS(g.derivative(200.0, 1), Error);

  CustomG full{"log", [](double x) { return std::log(x); }, [](double x) { return 1 / x; },
               [](double x) { return -1 / (x * x); }};
  const GFamily h(full, 10.0);
  CHECK(h.derivative(50.0, 3) == doctest::Approx(2 / (50.0 * 50.0 * 50.0)).epsilon(1e-6));
}

TEST_CASE("floor products") {
  const auto g = GFamily::loglog();
  CHECK(g.natural_start() == 3);
  CHECK(g.domain_start() == doctest::Approx(std::exp(std::exp(2.0))));
  for (std::uint64_t n = 3; n < 50'000; ++n) {
    const long double v = n * std::log(std::log(static_cast<long double>(n)));
    if (std::abs(v - std::round(v)) < 1e-9L) continue;
    REQUIRE(g.floor_product(n) == static_cast<std::int64_t>(std::floor(v)));
  }
  CHECK_THROWS_AS(FloorProduct(g, 2), Error);

  const auto values = enumerate_special(SpecialSetSpec::floor_product(g), 0, 2000);
  CHECK(std::is_sorted(values.begin(), values.end()));
  CHECK(std::adjacent_find(values.begin(), values.end()) == values.end());
  CHECK(values.front() >= 2);

  const auto table = PrimeTable::build(10'000);
  const auto primes = special_primes(SpecialSetSpec::parse("floorprod:log"), 0, 10'000, table);
  for (auto p : primes) {
    REQUIRE(oracle::is_prime(p));
    bool hit = false;
    for (std::uint64_t n = 2; n * std::log(double(n)) <= p + 1 && !hit; ++n) {
      hit = static_cast<std::uint64_t>(std::floor(n * std::log(double(n)))) == p;
    }
    REQUIRE(hit);
  }
}

TEST_CASE("validate_g on loglog") {
  const std::vector<double> grid{1e4, 1e5, 1e6, 1e7, 1e8, 1e9};
  const auto report = validate_g(GFamily::loglog(), grid);
  CHECK(report.relative_to_g.samples[0][2] == doctest::Approx(1.0276).epsilon(1e-3));
  CHECK(std::abs(report.relative_to_g.samples[0][2] - 1.0) < kAlphaTolerance);
  CHECK(report.relative_to_g.flags.alpha1_positive);
  CHECK(report.increasing_unbounded);
  CHECK(report.convexity);

  const auto log_report = validate_g(GFamily::logpow(), grid);
  CHECK(std::abs(log_report.relative_to_g.limit.value[0] - 1.0) < kAlphaTolerance);

  CHECK_THROWS_AS(validate_g(GFamily::loglog(), {1e4, 1e5, 1e6}), Error);
  CHECK_THROWS_AS(validate_g(GFamily::loglog(), {1e4, 2e4, 3e4, 4e4, 5e4}), Error);
  CHECK_THROWS_AS(validate_g(GFamily::loglog(), {100, 1e4, 1e5, 1e6, 1e7}), Error);
}

TEST_CASE("flags_from") {
  const auto flags = flags_from(AlphaEstimates{{1.0, 1.0, 3.0}});
  CHECK(flags.alpha1_positive);
  CHECK(flags.alpha2_nonnegative);
  CHECK_FALSE(flags.alpha1_ne_alpha2);
  CHECK_FALSE(flags.alpha3_ne_3alpha1);
  CHECK(flags.combo_ne == (std::abs(2 * 1.0 + 3.0 - 3 * 1.0) > kAlphaTolerance));
}
