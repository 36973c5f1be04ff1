#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace charvar {

using Integer = mpz_class;
using Rational = mpq_class;

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

/// num/den in lowest terms; mpq_class(num, den) alone does not canonicalize.
inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Integer parse_integer(std::string_view text) {
  Integer out;
  if (text.empty() || out.set_str(std::string(text), 10) != 0) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return out;
}

/// Accepts "p" or "p/q"; the result is canonicalized.
inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  return make_rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
}

inline bool fits_int64(const Integer& z) {
  static const Integer lo(std::to_string(std::numeric_limits<std::int64_t>::min()));
  static const Integer hi(std::to_string(std::numeric_limits<std::int64_t>::max()));
  return z >= lo && z <= hi;
}

inline std::int64_t to_int64(const Integer& z) { return std::stoll(z.get_str()); }

}  // namespace charvar
