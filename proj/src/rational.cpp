#include "tnum/rational.hpp"

#include <cctype>
#include <cmath>

#include "tnum/errors.hpp"

namespace tnum {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ValidationError("empty rational literal");
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    Rational q;
    if (q.set_str(text, 10) != 0 || q.get_den() == 0) {
      throw ValidationError("malformed rational literal '" + text + "'");
    }
    q.canonicalize();
    return q;
  }
  // Decimal: digits before and after the point, optional sign.
  std::string digits;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    if (text[0] == '-') digits.push_back('-');
    i = 1;
  }
  std::size_t frac_digits = 0;
  bool seen_digit = false;
  for (; i < text.size(); ++i) {
    if (i == dot) continue;
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw ValidationError("malformed decimal literal '" + text + "'");
    }
    digits.push_back(text[i]);
    seen_digit = true;
    if (i > dot) ++frac_digits;
  }
  if (!seen_digit) throw ValidationError("malformed decimal literal '" + text + "'");
  mpz_class num(digits, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_digits);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw ValidationError("cannot convert a non-finite value to a rational");
  return Rational(v);
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational floor(const Rational& q) {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(out);
}

Rational ratio(long num, long den) {
  Rational q{mpz_class(num), mpz_class(den)};
  q.canonicalize();
  return q;
}

}  // namespace tnum
