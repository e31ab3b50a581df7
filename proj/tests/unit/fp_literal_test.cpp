#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "floatdv/fp_literal.hpp"

using namespace floatdv;

namespace {

// strtod / strtof are the independent oracle for decimal rounding.
std::uint64_t oracle64(const std::string& s) { return std::bit_cast<std::uint64_t>(std::strtod(s.c_str(), nullptr)); }
std::uint64_t oracle32(const std::string& s) { return std::bit_cast<std::uint32_t>(std::strtof(s.c_str(), nullptr)); }

std::string random_decimal(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> ndig(1, 25), digit(0, 9), exp(-340, 320), coin(0, 1);
  std::string s;
  if (coin(rng)) s += '-';
  const int n = ndig(rng);
  const int point = std::uniform_int_distribution<int>(0, n)(rng);
  for (int i = 0; i < n; ++i) {
    if (i == point && i > 0) s += '.';
    s += static_cast<char>('0' + digit(rng));
  }
  if (coin(rng)) s += "e" + std::to_string(exp(rng));
  return s;
}

}  // namespace

TEST(FpLiteral, CorpusConstantsMatchStrtod) {
  for (const char* s : {"3.141592653589793", "6.123233995736766E-17", "1.0", "0.5", "-5.53", "1.7976931348623157e308",
                        "4.9e-324", "2.2250738585072014e-308", "0.1", "1e309", "1e-400", "0.0", "-0.0", "100.0",
                        "1.5707963267948966", "2.0", "10.0", "7.0E10", "123456789012345678901234567890"}) {
    EXPECT_EQ(encode_decimal(s, Sort::Float64).bits(), oracle64(s)) << s;
    EXPECT_EQ(encode_decimal(s, Sort::Float32).bits(), oracle32(s)) << s;
  }
}

TEST(FpLiteral, RandomDecimalsMatchStrtod) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const std::string s = random_decimal(rng);
    ASSERT_EQ(encode_decimal(s, Sort::Float64).bits(), oracle64(s)) << s;
    ASSERT_EQ(encode_decimal(s, Sort::Float32).bits(), oracle32(s)) << s;
  }
}

TEST(FpLiteral, HalfwayCasesRoundToEven) {
  // 2^53 + 1 lies halfway between two doubles and must round down to even.
  EXPECT_EQ(encode_decimal("9007199254740993", Sort::Float64).to_double(), 9007199254740992.0);
  EXPECT_EQ(encode_decimal("9007199254740995", Sort::Float64).to_double(), 9007199254740996.0);
  // Smallest subnormal halfway: 2^-1075 rounds to zero, slightly above rounds up.
  EXPECT_TRUE(encode_decimal("2.4703282292062327e-324", Sort::Float64).is_zero());
  EXPECT_EQ(encode_decimal("2.4703282292062328e-324", Sort::Float64).bits(), 1u);
}

TEST(FpLiteral, OverflowAndUnderflow) {
  auto inf = encode_decimal("-1e400", Sort::Float64);
  EXPECT_TRUE(inf.is_infinite());
  EXPECT_TRUE(inf.is_negative());
  auto z = encode_decimal("-1e-400", Sort::Float64);
  EXPECT_TRUE(z.is_zero());
  EXPECT_TRUE(z.sign);
  EXPECT_TRUE(encode_decimal("3.5e38", Sort::Float32).is_infinite());
}

TEST(FpLiteral, MalformedTextThrows) {
  for (const char* s : {"", "-", "1..0", "abc", "1e", "1.0x", ".", "e5"}) EXPECT_THROW(encode_decimal(s, Sort::Float64), LiteralError) << s;
}

TEST(FpLiteral, FieldsRoundTripRandomBits) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t b = rng();
    const auto lit = FpLiteral::from_bits(Sort::Float64, b);
    const auto back = FpLiteral::from_fields(Sort::Float64, lit.sign, lit.exponent, lit.significand);
    EXPECT_EQ(back, lit);
    if (!lit.is_nan()) {
      EXPECT_EQ(lit.bits(), b);
      EXPECT_EQ(std::bit_cast<std::uint64_t>(lit.to_double()), b);
    }
  }
}

TEST(FpLiteral, NaNIsCanonical) {
  const auto a = FpLiteral::from_bits(Sort::Float64, 0xfff0000000000001ull);
  EXPECT_TRUE(a.is_nan());
  EXPECT_EQ(a, FpLiteral::nan(Sort::Float64));
  EXPECT_FALSE(a.is_negative());
  EXPECT_EQ(FpLiteral::nan(Sort::Float32).bits(), 0x7fc00000u);
}

TEST(FpLiteral, Classification) {
  EXPECT_TRUE(FpLiteral::from_double(4.9e-324).is_subnormal());
  EXPECT_TRUE(FpLiteral::from_double(2.2250738585072014e-308).is_normal());
  EXPECT_TRUE(FpLiteral::from_double(-0.0).is_zero());
  EXPECT_TRUE(FpLiteral::from_double(-0.0).is_negative());
  EXPECT_FALSE(FpLiteral::from_double(0.0).is_normal());
  EXPECT_TRUE(FpLiteral::infinity(Sort::Float32, true).is_infinite());
}

TEST(FpLiteral, DecimalStringReadsBack) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto lit = FpLiteral::from_bits(Sort::Float64, rng());
    if (lit.is_nan() || lit.is_infinite()) continue;
    EXPECT_EQ(encode_decimal(to_decimal_string(lit), Sort::Float64), lit);
  }
  EXPECT_EQ(to_decimal_string(FpLiteral::from_double(1.0)), "1.0");
  EXPECT_EQ(to_decimal_string(FpLiteral::nan(Sort::Float64)), "NaN");
  EXPECT_EQ(to_decimal_string(FpLiteral::infinity(Sort::Float64, true)), "-oo");
}
