/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#include "lec/interval.hpp"

#include <ostream>

#include "lec/errors.hpp"

namespace lec {

Interval::Interval(const Rational& lo, const Rational& hi) : lo_(lo), hi_(hi) {
  if (hi_ < lo_) throw DomainError("interval with lo > hi: [" + lo.str() + ", " + hi.str() + "]");
}

Interval Interval::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty() || text.front() != '[') return Interval(Rational::parse(text));
  if (text.back() != ']') throw ParseError("missing ']' in interval", text.size());
  auto body = text.substr(1, text.size() - 2);
  auto comma = body.find(',');
  if (comma == std::string_view::npos) throw ParseError("missing ',' in interval", 1);
  return Interval(Rational::parse(trim(body.substr(0, comma))),
                  Rational::parse(trim(body.substr(comma + 1))));
}

Rational Interval::mid() const { return (lo_ + hi_) * Rational::of(1, 2); }

Interval& Interval::operator+=(const Interval& o) {
  lo_ += o.lo_;
  hi_ += o.hi_;
  return *this;
}

Interval& Interval::operator-=(const Interval& o) {
  Rational lo = lo_ - o.hi_;
  hi_ -= o.lo_;
  lo_ = std::move(lo);
  return *this;
}

Interval& Interval::operator*=(const Interval& o) {
  // Sign-case split avoids four products in the common cases.
  if (lo_.sign() >= 0 && o.lo_.sign() >= 0) {
    lo_ *= o.lo_;
    hi_ *= o.hi_;
    return *this;
  }
  if (hi_.sign() <= 0 && o.hi_.sign() <= 0) {
    Rational lo = hi_ * o.hi_;
    hi_ = lo_ * o.lo_;
    lo_ = std::move(lo);
    return *this;
  }
  Rational a = lo_ * o.lo_, b = lo_ * o.hi_, c = hi_ * o.lo_, d = hi_ * o.hi_;
  lo_ = min(min(a, b), min(c, d));
  hi_ = max(max(a, b), max(c, d));
  return *this;
}

Interval& Interval::operator/=(const Interval& o) {
  if (o.contains_zero()) throw DomainError("interval division by " + o.str() + " containing zero");
  Rational l = Rational(1) / o.hi_, h = Rational(1) / o.lo_;
  return *this *= Interval(l, h);
}

Interval Interval::sqr() const {
  Rational a = lo_ * lo_, b = hi_ * hi_;
  if (contains_zero()) return Interval(Rational(0), max(a, b));
  return a < b ? Interval(a, b) : Interval(b, a);
}

Interval Interval::pow(int e) const {
  if (e < 0) return Interval(1) / pow(-e);
  if (e == 0) return Interval(1);
  if (e % 2 == 0) {
    Interval s = sqr();
    return Interval(s.lo_.pow(e / 2), s.hi_.pow(e / 2));
  }
  return Interval(lo_.pow(e), hi_.pow(e));
}

Interval Interval::round_out(long bits) const {
  return Interval(lo_.floor_dyadic(bits), hi_.ceil_dyadic(bits));
}

std::string Interval::str() const { return "[" + lo_.str() + ", " + hi_.str() + "]"; }

Interval hull(const Interval& a, const Interval& b) {
  return Interval(min(a.lo(), b.lo()), max(a.hi(), b.hi()));
}

namespace {

bool exact_sqrt(const Rational& x, Rational& out) {
  Integer num = x.num(), den = x.den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return false;
  Integer a, b;
  mpz_sqrt(a.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(b.get_mpz_t(), den.get_mpz_t());
  out = Rational::of(a, b);
  return true;
}

long bits_for_width(const Rational& width_target) {
  if (width_target.sign() <= 0) throw DomainError("sqrt width target must be positive");
  // smallest k >= 1 with 2^k >= 2 / width_target
  Integer q = (Rational(2) / width_target).ceil();
  if (q <= 2) return 1;
  Integer qm = q - 1;
  return static_cast<long>(mpz_sizeinbase(qm.get_mpz_t(), 2));
}

}  // namespace

Interval sqrt(const Interval& a, const Rational& width_target) {
  if (a.lo().sign() < 0) throw DomainError("sqrt of interval with negative lower end " + a.str());
  long k = bits_for_width(width_target);
  Rational lo, hi;
  if (!exact_sqrt(a.lo(), lo)) {
    // floor(sqrt(floor(lo * 4^k))) / 2^k
    Integer m = (a.lo() * Rational::pow2(2 * k)).floor();
    Integer s;
    mpz_sqrt(s.get_mpz_t(), m.get_mpz_t());
    lo = Rational(s) * Rational::pow2(-k);
  }
  if (!exact_sqrt(a.hi(), hi)) {
    Integer m = (a.hi() * Rational::pow2(2 * k)).ceil();
    Integer s, rem;
    mpz_sqrtrem(s.get_mpz_t(), rem.get_mpz_t(), m.get_mpz_t());
    if (rem != 0) s += 1;
    hi = Rational(s) * Rational::pow2(-k);
  }
  return Interval(lo, hi);
}

Rational default_sqrt_width() { return Rational::pow2(-64); }

std::ostream& operator<<(std::ostream& os, const Interval& iv) { return os << iv.str(); }

}  // namespace lec
