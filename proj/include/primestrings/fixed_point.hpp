// Exact fixed-point handling of irrational constants.
//
// A constant alpha is stored as floor(alpha * 2^stored_bits). All floor
// computations bracket alpha between two fixed-point bounds and only return a
// value when both bounds agree, escalating precision (96 -> 192 -> 384 bits)
// when they do not.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace primestrings {

inline constexpr unsigned kInitialPrecisionBits = 96;
inline constexpr unsigned kMaxPrecisionBits = 384;

class IrrationalConstant {
 public:
  // Registry: "pi", "sqrt2", "e". Throws Error{invalid_argument} otherwise.
  static IrrationalConstant named(std::string_view name);

  // A decimal literal with at least 40 significant digits, e.g. "1.6180339887...".
  // Usable precision is limited by the number of digits supplied.
  static IrrationalConstant from_decimal(std::string name, std::string_view digits);

  static std::vector<std::string> registry_names();

  const std::string& name() const noexcept { return name_; }

  // Largest precision at which floor(alpha * 2^p) is known exactly.
  unsigned max_precision_bits() const noexcept { return max_precision_; }

  // floor(alpha * 2^p) for p <= max_precision_bits().
  mpz_class scaled(unsigned precision_bits) const;

  double approx() const;

 private:
  IrrationalConstant(std::string name, mpz_class mantissa, unsigned stored_bits, unsigned max_precision)
      : name_(std::move(name)), mantissa_(std::move(mantissa)), stored_bits_(stored_bits),
        max_precision_(max_precision) {}

  std::string name_;
  mpz_class mantissa_;  // floor(alpha * 2^stored_bits_)
  unsigned stored_bits_;
  unsigned max_precision_;
};

// Certified floor(n * alpha) and floor(m / alpha) for a fixed alpha > 1.
class BeattyArithmetic {
 public:
  explicit BeattyArithmetic(IrrationalConstant alpha);

  const IrrationalConstant& constant() const noexcept { return alpha_; }

  // floor(n * alpha). Throws precision_exhausted if undecidable at the
  // largest precision, range_exceeded if the result does not fit 64 bits.
  std::uint64_t floor_mul(std::uint64_t n) const;

  // floor(m / alpha), same error behaviour.
  std::uint64_t floor_div(std::uint64_t m) const;

  // Precision (bits) at which the last decision of this thread was settled;
  // exposed for tests of the escalation path.
  static unsigned last_precision_used() noexcept;

 private:
  struct Level {
    unsigned bits;
    std::vector<std::uint64_t> mul_lo, mul_hi;  // alpha in [mul_lo, mul_hi] / 2^bits
    std::vector<std::uint64_t> div_lo, div_hi;  // 1/alpha in [div_lo, div_hi] / 2^bits
  };

  std::uint64_t certified(std::uint64_t x, bool divide) const;

  IrrationalConstant alpha_;
  std::vector<Level> levels_;
};

// floor(x * a / 2^shift) for a little-endian limb vector a, or nullopt if the
// result is >= 2^64.
std::optional<std::uint64_t> mul_shift_floor(const std::vector<std::uint64_t>& a, std::uint64_t x,
                                             unsigned shift);

std::vector<std::uint64_t> to_limbs(const mpz_class& value);

}  // namespace primestrings
