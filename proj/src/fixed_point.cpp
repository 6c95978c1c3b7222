#include "primestrings/fixed_point.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "primestrings/error.hpp"

namespace primestrings {
namespace {

using u128 = unsigned __int128;

constexpr unsigned kNamedStoredBits = 512;

struct NamedConstant {
  std::string_view name;
  std::string_view hex;  // floor(alpha * 2^512)
};

constexpr std::array<NamedConstant, 3> kRegistry{{
    {"pi",
     "3243f6a8885a308d313198a2e03707344a4093822299f31d0082efa98ec4e6c89452821e638d01377be5466cf34e90c6cc0ac29b"
     "7c97c50dd3f84d5b5b5470917"},
    {"sqrt2",
     "16a09e667f3bcc908b2fb1366ea957d3e3adec17512775099da2f590b0667322a95f90608757145875163fcdfb907b6721ee950b"
     "c8738f694f0090e6c7bf44ed1"},
    {"e",
     "2b7e151628aed2a6abf7158809cf4f3c762e7160f38b4da56a784d9045190cfef324e7738926cfbe5f4bf8d8d8c31d763da06c80"
     "abb1185eb4f7c7b5757f59584"},
}};

thread_local unsigned g_last_precision = 0;

}  // namespace

IrrationalConstant IrrationalConstant::named(std::string_view name) {
  for (const auto& entry : kRegistry) {
    if (entry.name == name) {
      return IrrationalConstant(std::string(name), mpz_class(std::string(entry.hex), 16), kNamedStoredBits,
                                kMaxPrecisionBits);
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown constant '" + std::string(name) + "'");
}

std::vector<std::string> IrrationalConstant::registry_names() {
  std::vector<std::string> out;
  for (const auto& entry : kRegistry) out.emplace_back(entry.name);
  return out;
}

IrrationalConstant IrrationalConstant::from_decimal(std::string name, std::string_view digits) {
  std::string integral, fraction;
  bool seen_point = false;
  for (char c : digits) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      (seen_point ? fraction : integral).push_back(c);
    } else {
      throw Error(ErrorCode::invalid_argument, "malformed decimal constant '" + std::string(digits) + "'");
    }
  }
  std::string all = integral + fraction;
  const auto first_nonzero = all.find_first_not_of('0');
  if (first_nonzero == std::string::npos) throw Error(ErrorCode::invalid_argument, "constant must be positive");
  const std::size_t significant = all.size() - first_nonzero;
  if (significant < 40) {
    throw Error(ErrorCode::invalid_argument,
                "custom constants need >= 40 significant digits, got " + std::to_string(significant));
  }

  // value = all / 10^|fraction|; the digits pin it to within 10^-|fraction|.
  const mpz_class numerator(all, 10);
  mpz_class denominator;
  mpz_ui_pow_ui(denominator.get_mpz_t(), 10, fraction.size());

  // Precision usable with a +-1 ulp margin: 2^-p comfortably above 10^-|fraction|.
  const auto known_bits = static_cast<unsigned>(std::floor(static_cast<double>(fraction.size()) * std::log2(10.0)));
  const unsigned max_precision = std::min(kMaxPrecisionBits, known_bits > 4 ? known_bits - 4 : 0);
  const unsigned stored = max_precision;
  mpz_class mantissa = (numerator << stored) / denominator;
  return IrrationalConstant(std::move(name), std::move(mantissa), stored, max_precision);
}

mpz_class IrrationalConstant::scaled(unsigned precision_bits) const {
  if (precision_bits > max_precision_) {
    throw Error(ErrorCode::precision_exhausted, "constant '" + name_ + "' is only known to " +
                                                    std::to_string(max_precision_) + " bits");
  }
  return mantissa_ >> (stored_bits_ - precision_bits);
}

double IrrationalConstant::approx() const {
  mpf_class v(mantissa_, 128);
  mpf_div_2exp(v.get_mpf_t(), v.get_mpf_t(), stored_bits_);
  return v.get_d();
}

std::vector<std::uint64_t> to_limbs(const mpz_class& value) {
  std::vector<std::uint64_t> out((mpz_sizeinbase(value.get_mpz_t(), 2) + 63) / 64);
  std::size_t count = 0;
  mpz_export(out.data(), &count, -1, sizeof(std::uint64_t), 0, 0, value.get_mpz_t());
  out.resize(count);
  return out;
}

std::optional<std::uint64_t> mul_shift_floor(const std::vector<std::uint64_t>& a, std::uint64_t x, unsigned shift) {
  // product = x * a, little-endian limbs
  std::array<std::uint64_t, 16> product{};
  const std::size_t n = a.size();
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const u128 t = static_cast<u128>(a[i]) * x + carry;
    product[i] = static_cast<std::uint64_t>(t);
    carry = static_cast<std::uint64_t>(t >> 64);
  }
  product[n] = carry;

  const std::size_t limb = shift / 64;
  const unsigned bit = shift % 64;
  if (limb > n) return std::uint64_t{0};
  std::uint64_t low = product[limb] >> bit;
  std::uint64_t spill = 0;
  if (bit != 0 && limb + 1 <= n) {
    low |= product[limb + 1] << (64 - bit);
    spill = product[limb + 1] >> bit;
  } else if (bit == 0 && limb + 1 <= n) {
    spill = product[limb + 1];
  }
  if (spill != 0) return std::nullopt;
  for (std::size_t i = limb + 2; i <= n; ++i) {
    if (product[i] != 0) return std::nullopt;
  }
  return low;
}

BeattyArithmetic::BeattyArithmetic(IrrationalConstant alpha) : alpha_(std::move(alpha)) {
  std::vector<unsigned> precisions;
  for (unsigned p = kInitialPrecisionBits; p <= kMaxPrecisionBits; p *= 2) {
    if (p <= alpha_.max_precision_bits()) precisions.push_back(p);
  }
  if (precisions.empty() || precisions.back() != alpha_.max_precision_bits()) {
    precisions.push_back(alpha_.max_precision_bits());
  }
  if (precisions.front() < 64) {
    throw Error(ErrorCode::invalid_argument, "constant '" + alpha_.name() + "' has too few digits");
  }

  for (unsigned p : precisions) {
    const mpz_class a = alpha_.scaled(p);
    const mpz_class one_scaled = mpz_class(1) << p;
    if (a <= one_scaled) {
      throw Error(ErrorCode::domain_error, "Beatty constant must exceed 1 ('" + alpha_.name() + "')");
    }
    // a <= alpha*2^p < a+1; widen by one ulp on each side.
    const mpz_class lo = a - 1;
    const mpz_class hi = a + 2;
    const mpz_class two_p2 = mpz_class(1) << (2 * p);
    const mpz_class rlo = two_p2 / hi;
    const mpz_class rhi = (two_p2 + lo - 1) / lo;
    levels_.push_back(Level{p, to_limbs(lo), to_limbs(hi), to_limbs(rlo), to_limbs(rhi)});
  }
}

std::uint64_t BeattyArithmetic::certified(std::uint64_t x, bool divide) const {
  for (const auto& level : levels_) {
    const auto& lo = divide ? level.div_lo : level.mul_lo;
    const auto& hi = divide ? level.div_hi : level.mul_hi;
    const auto a = mul_shift_floor(lo, x, level.bits);
    const auto b = mul_shift_floor(hi, x, level.bits);
    if (!a) throw Error(ErrorCode::range_exceeded, "floor value exceeds 64 bits");
    if (b && *a == *b) {
      g_last_precision = level.bits;
      return *a;
    }
  }
  throw Error(ErrorCode::precision_exhausted,
              std::string("cannot decide floor(") + std::to_string(x) + (divide ? " / " : " * ") + alpha_.name() +
                  ") at " + std::to_string(levels_.back().bits) + " bits");
}

std::uint64_t BeattyArithmetic::floor_mul(std::uint64_t n) const { return certified(n, false); }

std::uint64_t BeattyArithmetic::floor_div(std::uint64_t m) const { return certified(m, true); }

unsigned BeattyArithmetic::last_precision_used() noexcept { return g_last_precision; }

}  // namespace primestrings
