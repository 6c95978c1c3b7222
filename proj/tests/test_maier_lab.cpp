#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "primestrings/error.hpp"
#include "primestrings/maier_lab.hpp"

using namespace primestrings;

namespace {

MaierParams params(std::uint64_t y, std::uint64_t p0, std::uint64_t z = 1) {
  MaierParams p;
  p.y = y;
  p.p0 = p0;
  p.t = threshold_t(y);
  p.z = z;
  return p;
}

}  // namespace

TEST_CASE("classify_residue") {
  CHECK(classify_residue(7, 12) == ResidueClass::A_plus);
  CHECK(classify_residue(2, 5) == ResidueClass::other);
  CHECK(classify_residue(1, 6) == ResidueClass::A_plus);
  CHECK(classify_residue(4, 5) == ResidueClass::A_minus);
  CHECK(classify_residue(1, 2) == ResidueClass::both);
  CHECK_THROWS_AS(classify_residue(2, 4), Error);
  CHECK_THROWS_AS(classify_residue(0, 1), Error);
}

TEST_CASE("build_Q") {
  const auto cfg = build_Q(5, 4, params(20, 3));
  CHECK(cfg.Q == 293930);
  CHECK(cfg.P_a == std::vector<std::uint64_t>{2, 7, 13, 17, 19});
  CHECK(cfg.case_tag == ResidueClass::A_minus);
  CHECK(build_Q(2, 1, params(3, 3)).Q == 2);
  CHECK(build_Q(3, 1, params(10, 5)).Q == 6);
  CHECK_THROWS_AS(build_Q(5, 4, params(20, 3), ResidueClass::A_plus), Error);
  mpq_class ratio(293930, 82944);
  ratio.canonicalize();
  CHECK(q_over_phi(cfg) == ratio);
}

TEST_CASE("crt anchors") {
  const auto cfg = make_config(7, 3, {2, 3, 5});
  CHECK(crt_anchor(cfg, AnchorSign::plus) == 30);
  CHECK(crt_anchor(cfg, AnchorSign::minus) == 60);

  std::mt19937_64 rng(7);
  const std::vector<std::uint64_t> pool{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43};
  int checked = 0;
  while (checked < 100) {
    const std::uint64_t q = 2 + rng() % 60;
    const std::uint64_t a = 1 + rng() % (q - 1);
    if (std::gcd(a, q) != 1) continue;
    std::vector<std::uint64_t> primes;
    for (auto p : pool) {
      if (q % p != 0 && rng() % 2) primes.push_back(p);
    }
    const auto cfg = make_config(q, a, primes);
    const mpz_class rad = cfg.radical_cofactor();
    for (auto sign : {AnchorSign::plus, AnchorSign::minus}) {
      const mpz_class x = crt_anchor(cfg, sign);
      const mpz_class want = (sign == AnchorSign::plus) ? mpz_class(a + q - 1) : mpz_class(a + 1);
      CHECK(x > 0);
      CHECK(x % rad == 0);
      CHECK(mpz_class(x - want) % q == 0);
      CHECK(x <= rad * q);
    }
    ++checked;
  }
}

TEST_CASE("intervals") {
  const auto cfg = make_config(7, 6, {2, 3, 5});
  const auto iv = build_interval(cfg, 0, 60, 40);
  CHECK(iv.start == 21);
  CHECK(iv.length == 40);
  CHECK_THROWS_AS(build_interval(cfg, 0, 30, 40), Error);
  const auto n = enlarge_minus_anchor(cfg, 30, 40);
  CHECK(n >= 40);
  CHECK(mpz_class(n - 30) % 210 == 0);
}

TEST_CASE("micro-instance Q = 30") {
  const auto cfg = make_config(5, 4, {2, 3});
  REQUIRE(cfg.Q == 30);
  const Interval I{1, 30};
  const auto st = count_S_T(cfg, I, true);
  CHECK(st.S == 2);
  CHECK(st.T == 6);
  CHECK(st.S_members == std::vector<mpz_class>{19, 29});

  const auto table = PrimeTable::build(1000);
  const auto census = sample_rows_census(cfg, I, 1, SpecialSetSpec::all_primes(), table, {1, true});
  REQUIRE(census.per_row.size() == 1);
  CHECK(census.per_row[0].good_primes == std::vector<mpz_class>{59});
  CHECK(census.per_row[0].bad_primes == std::vector<mpz_class>{31, 37, 41, 43, 47, 53});
  CHECK(census.column_residue_ok);
  CHECK(census.rows_with_bad == 1);
}

TEST_CASE("row census against a direct scan") {
  const auto cfg = build_Q(5, 4, params(20, 3));
  const auto table = PrimeTable::build(1 << 22);
  const Interval I{293771, 160};
  const auto census = sample_rows_census(cfg, I, 12, SpecialSetSpec::all_primes(), table, {3, false});
  const auto Q = cfg.Q.get_ui();
  std::uint64_t good = 0, bad = 0;
  for (std::uint64_t r = 1; r <= 12; ++r) {
    for (std::uint64_t i = 293771; i < 293771 + 160; ++i) {
      const auto v = r * Q + i;
      if (!oracle::is_prime(v)) continue;
      (v % 5 == 4 ? good : bad) += 1;
    }
  }
  CHECK(census.good == good);
  CHECK(census.bad == bad);
  CHECK(census.column_residue_ok);
  const auto again = sample_rows_census(cfg, I, 12, SpecialSetSpec::all_primes(), table, {1, false});
  CHECK(again.good == census.good);
  CHECK(again.max_good_run == census.max_good_run);
}

TEST_CASE("count_S_q and count_psi") {
  CHECK(count_S_q(4, 30) == 6);
  CHECK(count_S_q(5, 30) == 2);
  CHECK(count_S_q(2, 10) == 5);
  CHECK(count_psi(30, 5) == 12);
  CHECK(count_psi(1000, 2) == 1);
  CHECK(count_psi(10, 11) == 10);
  for (std::uint64_t q = 2; q <= 12; ++q) {
    for (std::uint64_t z : {1ull, 17ull, 500ull, 4321ull}) REQUIRE(count_S_q(q, z) == oracle::count_S_q(q, z));
  }
  for (std::uint64_t t : {2ull, 3ull, 7ull, 10ull, 31ull, 100ull}) {
    for (std::uint64_t x : {0ull, 1ull, 99ull, 5000ull}) REQUIRE(count_psi(x, t) == oracle::count_psi(x, t));
  }
}

TEST_CASE("parameter choice") {
  CHECK_FALSE(threshold_t(10).has_value());
  CHECK(threshold_t(1'000'000).has_value());
  CHECK(choose_p0(20, 5) == 3);
  CHECK(choose_p0(20, 3) == 5);

  WellDistModel model;
  model.D = DModel{DModel::Kind::constant, 2.0};
  const auto p = choose_parameters(ScaleX::from_value(1e12), 5, model, std::nullopt, ResidueClass::A_minus);
  CHECK(p.y == static_cast<std::uint64_t>(std::ceil(std::log(1e12) / 2)));
  CHECK(p.z == 8);
  CHECK_THROWS_AS(choose_parameters(ScaleX::from_value(1e12), 5, model, 3), Error);
}

TEST_CASE("bound evaluators") {
  const LogScales s{10.0, std::log(10.0), std::log(std::log(10.0))};
  CHECK(std::abs(string_bound_pm(s, 2.0, 4) - std::pow(5.0, 0.25)) < 1e-12);
  CHECK(case1_proxy(4.0, 1.0, 2) == 2.0);
  CHECK_THROWS_AS(string_bound_pm(s, 0.0, 4), Error);
  CHECK_THROWS_AS(case1_proxy(4.0, 0.0, 1), Error);
}
