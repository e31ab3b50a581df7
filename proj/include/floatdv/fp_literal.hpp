#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace floatdv {

/// Sorts of the formula IR. Float formats follow binary32 / binary64.
enum class Sort { Float32, Float64, Bool, Int, RoundingMode };

std::string_view sort_name(Sort s);

constexpr bool is_fp(Sort s) { return s == Sort::Float32 || s == Sort::Float64; }

/// Exponent field width in bits (8 or 11).
constexpr unsigned exponent_bits(Sort s) { return s == Sort::Float32 ? 8u : 11u; }
/// Significand precision p, including the hidden bit (24 or 53).
constexpr unsigned precision(Sort s) { return s == Sort::Float32 ? 24u : 53u; }
/// Stored significand field width (23 or 52).
constexpr unsigned significand_bits(Sort s) { return precision(s) - 1; }
constexpr int exponent_bias(Sort s) { return s == Sort::Float32 ? 127 : 1023; }
constexpr int min_exponent(Sort s) { return 1 - exponent_bias(s); }
constexpr int max_exponent(Sort s) { return exponent_bias(s); }

class LiteralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bit-exact IEEE-754 value in one of the two float formats.
///
/// NaN is canonical: every NaN constructed through this interface is the
/// positive quiet NaN with only the top significand bit set.
struct FpLiteral {
  Sort format = Sort::Float64;
  bool sign = false;
  std::uint32_t exponent = 0;      // biased exponent field
  std::uint64_t significand = 0;   // trailing significand field

  static FpLiteral from_bits(Sort format, std::uint64_t bits);
  static FpLiteral from_double(double d);
  static FpLiteral from_float(float f);
  static FpLiteral nan(Sort format);
  static FpLiteral infinity(Sort format, bool negative);
  static FpLiteral zero(Sort format, bool negative);
  /// Builds from explicit fields; throws LiteralError when a field overflows
  /// its width. A NaN pattern is canonicalized.
  static FpLiteral from_fields(Sort format, bool sign, std::uint64_t exponent,
                               std::uint64_t significand);

  std::uint64_t bits() const;
  double to_double() const;  // Float64 only
  float to_float() const;    // Float32 only

  bool is_nan() const;
  bool is_infinite() const;
  bool is_zero() const;
  bool is_subnormal() const;
  bool is_normal() const;
  bool is_negative() const { return sign && !is_nan(); }

  FpLiteral negated() const;

  friend bool operator==(const FpLiteral&, const FpLiteral&) = default;
};

/// Round-to-nearest-even conversion of a decimal literal
/// (`[+-]digits[.digits][(e|E)[+-]digits]`) into `format`. Overflow yields
/// an infinity and underflow a signed zero; there is no error path for
/// well-formed input. Throws LiteralError on malformed text.
FpLiteral encode_decimal(std::string_view text, Sort format);

/// Shortest decimal text that reads back to the same value (for debug
/// output); specials print as NaN, +oo, -oo.
std::string to_decimal_string(const FpLiteral& lit);

}  // namespace floatdv
