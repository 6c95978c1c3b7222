#include <doctest.h>

#include "oracles.hpp"
#include "primestrings/error.hpp"
#include "primestrings/fixed_point.hpp"

using namespace primestrings;

namespace {

// floor(decimal * 2^bits) from a published decimal expansion "d.ddd...".
mpz_class scaled_reference(const std::string& decimal, unsigned bits) {
  const auto dot = decimal.find('.');
  const std::string digits = decimal.substr(0, dot) + decimal.substr(dot + 1);
  mpz_class numerator(digits), ten;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, decimal.size() - dot - 1);
  numerator <<= bits;
  return numerator / ten;
}

const std::string kPi = "3.14159265358979323846264338327950288419716939937510";
const std::string kSqrt2 = "1.41421356237309504880168872420969807856967187537694";
const std::string kE = "2.71828182845904523536028747135266249775724709369995";

}  // namespace

TEST_CASE("registry constants match published expansions") {
  for (const auto& [name, decimal] : {std::pair{"pi", kPi}, {"sqrt2", kSqrt2}, {"e", kE}}) {
    const auto c = IrrationalConstant::named(name);
    CHECK(c.max_precision_bits() >= kMaxPrecisionBits);
    for (unsigned bits : {32u, 64u, 96u, 128u, 150u}) {
      CHECK_MESSAGE(c.scaled(bits) == scaled_reference(decimal, bits), name, " at ", bits);
    }
  }
  CHECK(IrrationalConstant::named("pi").approx() == doctest::Approx(3.141592653589793));
  CHECK_THROWS_AS(IrrationalConstant::named("tau"), Error);
}

TEST_CASE("from_decimal") {
  const auto phi = IrrationalConstant::from_decimal("phi", "1.6180339887498948482045868343656381177203091798057");
  CHECK(phi.max_precision_bits() == 49 * 3322 / 1000 - 4);
  CHECK_THROWS_AS(IrrationalConstant::from_decimal("short", "1.41421356"), Error);
  CHECK_THROWS_AS(IrrationalConstant::from_decimal("junk", "1.4142135623730950488016887242096980785696718x"), Error);
}

TEST_CASE("floor_mul and floor_div agree with the 128-bit oracle") {
  const BeattyArithmetic pi(IrrationalConstant::named("pi"));
  for (std::uint64_t n = 1; n <= 200'000; ++n) REQUIRE(pi.floor_mul(n) == oracle::floor_n_pi(n));
  std::uint64_t below = 0;  // #{n : floor(n pi) < m}
  std::uint64_t n = 1;
  for (std::uint64_t m = 1; m <= 300'000; ++m) {
    while (oracle::floor_n_pi(n) < m) {
      ++below;
      ++n;
    }
    REQUIRE(pi.floor_div(m) == below);
  }
  CHECK(pi.floor_mul(1'000'000'000'000ull) == 3'141'592'653'589ull);
  CHECK_THROWS_AS(pi.floor_mul(~std::uint64_t{0}), Error);
}

TEST_CASE("precision escalation") {
  const BeattyArithmetic pi(IrrationalConstant::named("pi"));
  pi.floor_mul(7);
  CHECK(BeattyArithmetic::last_precision_used() == kInitialPrecisionBits);

  // 2 alpha = 3 + 2e-50: undecidable at 96 bits, settled at 192.
  const std::string near = "1.5" + std::string(49, '0') + "1" + std::string(29, '0') + "7";
  const BeattyArithmetic close(IrrationalConstant::from_decimal("near", near));
  CHECK(close.floor_mul(2) == 3);
  CHECK(BeattyArithmetic::last_precision_used() == 192);

  // A rational alpha makes 2 alpha an exact integer: never decidable.
  const BeattyArithmetic exact(IrrationalConstant::from_decimal("three_halves", "1.5" + std::string(44, '0')));
  CHECK_THROWS_AS(exact.floor_mul(2), Error);
  try {
    exact.floor_mul(2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::precision_exhausted);
  }
}

TEST_CASE("alpha must exceed one") {
  CHECK_THROWS_AS(BeattyArithmetic(IrrationalConstant::from_decimal("small", "0.5772156649015328606065120900824024310421593359")),
                  Error);
}

TEST_CASE("mul_shift_floor") {
  const auto limbs = to_limbs(mpz_class(3) << 64);
  CHECK(mul_shift_floor(limbs, 5, 64) == 15);
  CHECK_FALSE(mul_shift_floor(limbs, ~std::uint64_t{0}, 0).has_value());
}
