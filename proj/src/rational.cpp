#include "nullwave/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace nullwave {

namespace {

BigInt pow10(long k) {
  BigInt p = 1;
  for (long i = 0; i < k; ++i) p *= 10;
  return p;
}

}  // namespace

std::optional<Rational> parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) return std::nullopt;

  // explicit fraction p/q
  if (auto slash = s.find('/'); slash != std::string::npos) {
    auto p = parse_rational(s.substr(0, slash));
    auto q = parse_rational(s.substr(slash + 1));
    if (!p || !q || *q == 0) return std::nullopt;
    return *p / *q;
  }

  bool neg = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') neg = (s[i++] == '-');

  std::string digits;     // mantissa with the point removed
  long frac_len = 0;      // digits after the point
  bool seen_point = false, seen_digit = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
    } else {
      digits.push_back(s[i]);
      seen_digit = true;
      if (seen_point) ++frac_len;
    }
  }
  if (!seen_digit) return std::nullopt;

  long exp10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
    if (i >= s.size()) return std::nullopt;
    long v = 0;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
      v = v * 10 + (s[i] - '0');
      if (v > 100000) return std::nullopt;
    }
    exp10 = eneg ? -v : v;
  }
  if (i != s.size()) return std::nullopt;

  // the BigInt string constructor treats a leading zero as an octal prefix
  const std::size_t nz = digits.find_first_not_of('0');
  BigInt mant = (nz == std::string::npos) ? BigInt(0) : BigInt(digits.substr(nz));
  if (neg) mant = -mant;
  long shift = exp10 - frac_len;
  Rational r(mant);
  if (shift > 0) r *= pow10(shift);
  if (shift < 0) r /= pow10(-shift);
  return r;
}

std::string format_rational(const Rational& r) {
  std::ostringstream os;
  if (denominator(r) == 1) {
    os << numerator(r);
  } else {
    os << numerator(r) << "/" << denominator(r);
  }
  return os.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace nullwave
