#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lba {

/// Exact rational number. All matrix construction and closed-form parameter
/// evaluation happens in this type; doubles are produced by one final rounding.
using Rational = mpq_class;

/// Parses "p/q", integer, or decimal notation ("0.623538", "-1.5e-3") into an
/// exact rational. Decimal input is exact: 0.623538 becomes 623538/1000000.
inline Rational rational_from_decimal(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("rational_from_decimal: empty string");
  if (s.find('/') != std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("rational_from_decimal: bad fraction '" + s + "'");
    r.canonicalize();
    return r;
  }
  bool neg = false;
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') neg = (s[pos++] == '-');
  std::string digits;
  long frac_len = 0, exp10 = 0;
  bool saw_digit = false, saw_dot = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c >= '0' && c <= '9') {
      digits += c;
      saw_digit = true;
      if (saw_dot) ++frac_len;
    } else if (c == '.' && !saw_dot) {
      saw_dot = true;
    } else if ((c == 'e' || c == 'E') && saw_digit) {
      exp10 = std::stol(s.substr(pos + 1));
      pos = s.size() - 1;
    } else {
      throw std::invalid_argument("rational_from_decimal: bad number '" + s + "'");
    }
  }
  if (!saw_digit) throw std::invalid_argument("rational_from_decimal: bad number '" + s + "'");
  mpz_class num(digits.empty() ? "0" : digits, 10);
  if (neg) num = -num;
  long net = exp10 - frac_len;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
  Rational r = net < 0 ? Rational(num, scale) : Rational(num * scale);
  r.canonicalize();
  return r;
}

/// "p/q" for non-integers, plain integer string otherwise.
inline std::string to_fraction_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Normalized scientific decimal: value = sign * 0.digits * 10^exp10 with a
/// nonzero leading digit (zero is sign 0, digits "0").
struct ScientificDecimal {
  int sign = 0;
  std::string digits;
  long exp10 = 0;
};

/// Rounds r to `significant` digits (half away from zero).
inline ScientificDecimal to_scientific(const Rational& r, int significant) {
  if (significant < 1) throw std::invalid_argument("to_scientific: need at least 1 digit");
  ScientificDecimal out;
  if (r == 0) {
    out.digits = "0";
    return out;
  }
  out.sign = sgn(r);
  mpz_class p = abs(r.get_num()), q = r.get_den();
  // Find exp10 with 10^(exp10-1) <= p/q < 10^exp10, then round p/q * 10^(significant-exp10).
  long exp10 = static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 10)) -
               static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 10)) + 1;
  auto pow10 = [](long e) {
    mpz_class z;
    mpz_ui_pow_ui(z.get_mpz_t(), 10, static_cast<unsigned long>(e));
    return z;
  };
  auto cmp_pow = [&](long e) {  // sign of p/q - 10^e
    return e >= 0 ? cmp(p, q * pow10(e)) : cmp(p * pow10(-e), q);
  };
  while (cmp_pow(exp10) >= 0) ++exp10;
  while (cmp_pow(exp10 - 1) < 0) --exp10;
  long shift = significant - exp10;
  mpz_class num = p, den = q;
  if (shift >= 0) num *= pow10(shift); else den *= pow10(-shift);
  mpz_class rounded = (2 * num + den) / (2 * den);  // floor((n/d)+1/2)
  std::string digs = rounded.get_str();
  if (static_cast<int>(digs.size()) > significant) {  // rounding carried into a new digit
    digs.resize(significant);
    ++exp10;
  }
  out.digits = digs;
  out.exp10 = exp10;
  return out;
}

/// Decimal rendering with `significant` digits; plain notation for moderate
/// exponents, otherwise "d.ddde±xx".
inline std::string decimal_string(const Rational& r, int significant) {
  ScientificDecimal sd = to_scientific(r, significant);
  if (sd.sign == 0) return "0";
  std::string body;
  if (sd.exp10 > 0 && sd.exp10 <= 21 && sd.exp10 >= static_cast<long>(sd.digits.size())) {
    body = sd.digits + std::string(sd.exp10 - sd.digits.size(), '0');
  } else if (sd.exp10 > 0 && sd.exp10 <= 21) {
    body = sd.digits.substr(0, sd.exp10) + "." + sd.digits.substr(sd.exp10);
  } else if (sd.exp10 <= 0 && sd.exp10 > -4) {
    body = "0." + std::string(-sd.exp10, '0') + sd.digits;
  } else {
    body = sd.digits.substr(0, 1);
    if (sd.digits.size() > 1) body += "." + sd.digits.substr(1);
    body += "e" + std::to_string(sd.exp10 - 1);
  }
  return (sd.sign < 0 ? "-" : "") + body;
}

/// Number of decimal digits to which x agrees with ref:
/// -log10(|x-ref| / |ref|), capped at 60; 60 means exact agreement.
inline double digits_of_agreement(const Rational& x, const Rational& ref) {
  if (ref == 0) return x == 0 ? 60.0 : 0.0;
  Rational rel = abs(x - ref) / abs(ref);
  if (rel == 0) return 60.0;
  double d = -std::log10(rel.get_d());
  if (!std::isfinite(d) || d > 60.0) d = 60.0;  // get_d underflows for tiny rel
  return d;
}

}  // namespace lba
