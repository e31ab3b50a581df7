#include "floatdv/fp_literal.hpp"

#include <gmpxx.h>

#include <bit>
#include <cctype>
#include <charconv>
#include <limits>

static_assert(sizeof(unsigned long) == 8, "mpz get_ui must cover 64-bit significands");

namespace floatdv {

std::string_view sort_name(Sort s) {
  switch (s) {
    case Sort::Float32: return "Float32";
    case Sort::Float64: return "Float64";
    case Sort::Bool: return "Bool";
    case Sort::Int: return "Int";
    case Sort::RoundingMode: return "RoundingMode";
  }
  return "?";
}

namespace {

void require_fp(Sort s) {
  if (!is_fp(s)) throw LiteralError("FpLiteral needs a float format, got " + std::string(sort_name(s)));
}

std::uint64_t exp_mask(Sort s) { return (std::uint64_t{1} << exponent_bits(s)) - 1; }
std::uint64_t sig_mask(Sort s) { return (std::uint64_t{1} << significand_bits(s)) - 1; }

}  // namespace

FpLiteral FpLiteral::from_fields(Sort format, bool sign, std::uint64_t exponent,
                                 std::uint64_t significand) {
  require_fp(format);
  if (exponent > exp_mask(format)) throw LiteralError("exponent field too wide");
  if (significand > sig_mask(format)) throw LiteralError("significand field too wide");
  if (exponent == exp_mask(format) && significand != 0) return nan(format);
  FpLiteral l;
  l.format = format;
  l.sign = sign;
  l.exponent = static_cast<std::uint32_t>(exponent);
  l.significand = significand;
  return l;
}

FpLiteral FpLiteral::from_bits(Sort format, std::uint64_t bits) {
  require_fp(format);
  const unsigned sb = significand_bits(format);
  const unsigned eb = exponent_bits(format);
  if (format == Sort::Float32 && bits > 0xFFFFFFFFull) throw LiteralError("Float32 bit pattern wider than 32 bits");
  return from_fields(format, (bits >> (sb + eb)) & 1u, (bits >> sb) & exp_mask(format),
                     bits & sig_mask(format));
}

FpLiteral FpLiteral::from_double(double d) { return from_bits(Sort::Float64, std::bit_cast<std::uint64_t>(d)); }

FpLiteral FpLiteral::from_float(float f) { return from_bits(Sort::Float32, std::bit_cast<std::uint32_t>(f)); }

FpLiteral FpLiteral::nan(Sort format) {
  require_fp(format);
  FpLiteral l;
  l.format = format;
  l.exponent = static_cast<std::uint32_t>(exp_mask(format));
  l.significand = std::uint64_t{1} << (significand_bits(format) - 1);
  return l;
}

FpLiteral FpLiteral::infinity(Sort format, bool negative) {
  return from_fields(format, negative, exp_mask(format), 0);
}

FpLiteral FpLiteral::zero(Sort format, bool negative) { return from_fields(format, negative, 0, 0); }

std::uint64_t FpLiteral::bits() const {
  const unsigned sb = significand_bits(format);
  const unsigned eb = exponent_bits(format);
  return (std::uint64_t{sign} << (sb + eb)) | (std::uint64_t{exponent} << sb) | significand;
}

double FpLiteral::to_double() const {
  if (format != Sort::Float64) throw LiteralError("to_double on a Float32 literal");
  return std::bit_cast<double>(bits());
}

float FpLiteral::to_float() const {
  if (format != Sort::Float32) throw LiteralError("to_float on a Float64 literal");
  return std::bit_cast<float>(static_cast<std::uint32_t>(bits()));
}

bool FpLiteral::is_nan() const { return exponent == exp_mask(format) && significand != 0; }
bool FpLiteral::is_infinite() const { return exponent == exp_mask(format) && significand == 0; }
bool FpLiteral::is_zero() const { return exponent == 0 && significand == 0; }
bool FpLiteral::is_subnormal() const { return exponent == 0 && significand != 0; }
bool FpLiteral::is_normal() const { return exponent != 0 && exponent != exp_mask(format); }

FpLiteral FpLiteral::negated() const {
  if (is_nan()) return *this;
  FpLiteral l = *this;
  l.sign = !l.sign;
  return l;
}

FpLiteral encode_decimal(std::string_view text, Sort format) {
  require_fp(format);
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) negative = text[pos++] == '-';

  std::string digits;
  long long exp10 = 0;
  bool any_digit = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits.push_back(text[pos++]);
    any_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits.push_back(text[pos++]);
      --exp10;
      any_digit = true;
    }
  }
  if (!any_digit) throw LiteralError("malformed decimal literal '" + std::string(text) + "'");
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool eneg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) eneg = text[pos++] == '-';
    if (pos >= text.size()) throw LiteralError("malformed exponent in '" + std::string(text) + "'");
    long long e = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (e < 100000000) e = e * 10 + (text[pos] - '0');
      ++pos;
    }
    exp10 += eneg ? -e : e;
  }
  if (pos != text.size()) throw LiteralError("trailing characters in '" + std::string(text) + "'");

  const auto first = digits.find_first_not_of('0');
  if (first == std::string::npos) return FpLiteral::zero(format, negative);
  digits.erase(0, first);
  const long long nd = static_cast<long long>(digits.size());

  // Decimal magnitude lies in [10^(nd-1+exp10), 10^(nd+exp10)).
  const long long inf_threshold = format == Sort::Float64 ? 309 : 39;
  const long long zero_threshold = format == Sort::Float64 ? -325 : -46;
  if (nd - 1 + exp10 >= inf_threshold) return FpLiteral::infinity(format, negative);
  if (nd + exp10 <= zero_threshold) return FpLiteral::zero(format, negative);

  mpz_class num(digits, 10);
  mpz_class den = 1;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 >= 0) num *= pow10;
  else den = pow10;

  const long p = precision(format);
  const long min_q = min_exponent(format) - (p - 1);  // exponent of the smallest subnormal
  const long max_q = max_exponent(format) - (p - 1);
  const mpz_class low = mpz_class(1) << (p - 1);
  const mpz_class high = mpz_class(1) << p;

  long k = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) - p;
  mpz_class q, r, n2, d2;
  auto divide = [&](long shift) {
    n2 = num;
    d2 = den;
    if (shift >= 0) d2 <<= shift;
    else n2 <<= -shift;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
  };
  divide(k);
  while (q >= high) divide(++k);
  while (q < low) divide(--k);
  if (k < min_q) {
    k = min_q;
    divide(k);
  }

  const int half = cmp(mpz_class(r << 1), d2);
  if (half > 0 || (half == 0 && mpz_odd_p(q.get_mpz_t()))) ++q;
  if (q == high) {
    q = low;
    ++k;
  }
  if (k > max_q) return FpLiteral::infinity(format, negative);
  if (q == 0) return FpLiteral::zero(format, negative);

  if (q >= low) {
    const mpz_class frac = q - low;
    const auto biased = static_cast<std::uint64_t>(k + (p - 1) + exponent_bias(format));
    return FpLiteral::from_fields(format, negative, biased, frac.get_ui());
  }
  return FpLiteral::from_fields(format, negative, 0, q.get_ui());
}

std::string to_decimal_string(const FpLiteral& lit) {
  if (lit.is_nan()) return "NaN";
  if (lit.is_infinite()) return lit.sign ? "-oo" : "+oo";
  char buf[64];
  std::to_chars_result res;
  if (lit.format == Sort::Float64) res = std::to_chars(buf, buf + sizeof buf, lit.to_double());
  else res = std::to_chars(buf, buf + sizeof buf, lit.to_float());
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

}  // namespace floatdv
