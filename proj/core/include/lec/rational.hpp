/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace lec {

using Integer = mpz_class;

/// Exact rational number in canonical form: gcd(|num|, den) = 1, den >= 1.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long long v);  // NOLINT(google-explicit-constructor)
  Rational(const Integer& v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  /// num/den reduced; throws DomainError when den == 0.
  static Rational of(const Integer& num, const Integer& den);
  static Rational of(long long num, long long den);
  /// 2^k for any signed k.
  static Rational pow2(long k);

  /// Accepts "a", "a/b", "-a/b", "2^-10", "1.5", "1.5e5", "4e7", "3*2^-4".
  static Rational parse(std::string_view text);

  Integer num() const { return v_.get_num(); }
  Integer den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  Rational pow(int e) const;
  Integer floor() const;
  Integer ceil() const;
  double to_double() const { return v_.get_d(); }
  long double to_long_double() const;

  /// Largest multiple of 2^-bits that is <= *this (resp. smallest >=).
  Rational floor_dyadic(long bits) const;
  Rational ceil_dyadic(long bits) const;

  /// "num/den" in lowest terms, "num" when den = 1.
  std::string str() const;

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace lec
