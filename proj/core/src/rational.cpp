/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#include "lec/rational.hpp"

#include <cctype>
#include <ostream>

#include "lec/errors.hpp"

namespace lec {

Rational::Rational(long long v) {
  // mpq_class has no long long constructor on every platform.
  v_ = mpq_class(mpz_class(std::to_string(v)));
}

Rational Rational::of(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return Rational(q);
}

Rational Rational::of(long long num, long long den) {
  return of(Integer(std::to_string(num)), Integer(std::to_string(den)));
}

Rational Rational::pow2(long k) {
  Integer p = 1;
  if (k >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    return Rational(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-k));
  return of(Integer(1), p);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::pow(int e) const {
  if (e < 0) return Rational(1) / pow(-e);
  Integer n, d;
  mpz_pow_ui(n.get_mpz_t(), v_.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), v_.get_den_mpz_t(), static_cast<unsigned long>(e));
  return of(n, d);
}

Integer Rational::floor() const {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return r;
}

Integer Rational::ceil() const {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return r;
}

long double Rational::to_long_double() const {
  // Split into integer and fractional parts to keep the mantissa.
  Integer ip = floor();
  Rational frac = *this - Rational(ip);
  Integer scaled;
  mpz_mul_2exp(scaled.get_mpz_t(), frac.v_.get_num_mpz_t(), 64);
  mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), frac.v_.get_den_mpz_t());
  long double f = static_cast<long double>(scaled.get_d()) / 18446744073709551616.0L;
  return static_cast<long double>(ip.get_d()) + f;
}

Rational Rational::floor_dyadic(long bits) const {
  if (bits >= 0 && v_.get_den() == 1) return *this;
  Integer num = v_.get_num(), den = v_.get_den(), s;
  if (bits >= 0)
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  else
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-bits));
  mpz_fdiv_q(s.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return Rational(s) * pow2(-bits);
}

Rational Rational::ceil_dyadic(long bits) const {
  if (bits >= 0 && v_.get_den() == 1) return *this;
  Integer num = v_.get_num(), den = v_.get_den(), s;
  if (bits >= 0)
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  else
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-bits));
  mpz_cdiv_q(s.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return Rational(s) * pow2(-bits);
}

std::string Rational::str() const { return v_.get_str(); }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

namespace {

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;
  bool done() const { return pos >= s.size(); }
  char peek() const { return done() ? '\0' : s[pos]; }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
};

Integer parse_digits(Cursor& c) {
  std::size_t start = c.pos;
  while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) ++c.pos;
  if (c.pos == start) throw ParseError("expected digits", c.pos);
  return Integer(std::string(c.s.substr(start, c.pos - start)));
}

long parse_signed_small(Cursor& c) {
  bool neg = false;
  if (c.peek() == '-' || c.peek() == '+') {
    neg = c.peek() == '-';
    ++c.pos;
  }
  Integer v = parse_digits(c);
  if (!v.fits_slong_p()) throw ParseError("exponent out of range", c.pos);
  return neg ? -v.get_si() : v.get_si();
}

// unsigned factor: digits[.digits][e[+-]digits] or digits^[+-]digits
Rational parse_factor(Cursor& c) {
  std::size_t start = c.pos;
  Integer ipart = parse_digits(c);
  if (c.peek() == '^') {
    ++c.pos;
    long e = parse_signed_small(c);
    if (ipart == 0 && e < 0) throw ParseError("zero to negative power", start);
    return Rational(ipart).pow(static_cast<int>(e));
  }
  Rational value(ipart);
  if (c.peek() == '.') {
    ++c.pos;
    std::size_t fstart = c.pos;
    while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) ++c.pos;
    std::string frac(c.s.substr(fstart, c.pos - fstart));
    if (!frac.empty()) {
      Integer f(frac);
      Integer scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
      value += Rational::of(f, scale);
    }
  }
  if (c.peek() == 'e' || c.peek() == 'E') {
    ++c.pos;
    long e = parse_signed_small(c);
    value *= Rational(10).pow(static_cast<int>(e));
  }
  return value;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  Cursor c{text};
  c.skip_ws();
  bool neg = false;
  if (c.peek() == '-' || c.peek() == '+') {
    neg = c.peek() == '-';
    ++c.pos;
  } else if (text.substr(c.pos).starts_with("\xe2\x88\x92")) {  // U+2212 minus
    neg = true;
    c.pos += 3;
  }
  Rational value = parse_factor(c);
  while (c.peek() == '*' || c.peek() == '/') {
    char op = c.peek();
    ++c.pos;
    Rational f = parse_factor(c);
    if (op == '*') {
      value *= f;
    } else {
      if (f.is_zero()) throw ParseError("division by zero", c.pos);
      value /= f;
    }
  }
  c.skip_ws();
  if (!c.done()) throw ParseError("unexpected character '" + std::string(1, c.peek()) + "'", c.pos);
  return neg ? -value : value;
}

}  // namespace lec
