/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "lec/rational.hpp"

namespace lec {

/// Closed interval [lo, hi] with exact rational endpoints. Arithmetic is
/// exact on endpoints, so every result encloses the image of its operands
/// without any rounding; only `sqrt` and `round_out` widen.
class Interval {
 public:
  Interval() = default;
  Interval(const Rational& point) : lo_(point), hi_(point) {}  // NOLINT(google-explicit-constructor)
  Interval(int point) : lo_(point), hi_(point) {}  // NOLINT(google-explicit-constructor)
  Interval(const Rational& lo, const Rational& hi);

  /// Parses "[lo, hi]" or a single rational.
  static Interval parse(std::string_view text);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational mid() const;
  bool is_point() const { return lo_ == hi_; }

  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool subset_of(const Interval& o) const { return o.lo_ <= lo_ && hi_ <= o.hi_; }
  bool positive() const { return lo_.sign() > 0; }
  bool negative() const { return hi_.sign() < 0; }

  Interval operator-() const { return Interval(-hi_, -lo_); }
  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);
  /// Throws DomainError when `o` contains zero.
  Interval& operator/=(const Interval& o);

  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
  friend Interval operator*(Interval a, const Interval& b) { return a *= b; }
  friend Interval operator/(Interval a, const Interval& b) { return a /= b; }
  friend bool operator==(const Interval&, const Interval&) = default;

  /// x^2 with the dependency handled (never negative).
  Interval sqr() const;
  Interval pow(int e) const;

  /// Outward rounding of both endpoints to the 2^-bits grid.
  Interval round_out(long bits) const;

  std::string str() const;

 private:
  Rational lo_;
  Rational hi_;
};

Interval hull(const Interval& a, const Interval& b);

/// Enclosure [l, u] of sqrt(a) with l^2 <= a.lo and u^2 >= a.hi exactly.
/// Endpoints are dyadic with denominator at most 2^k where 2^-k <= width_target/2,
/// so u - l <= width_target + (sqrt(a.hi) - sqrt(a.lo)). Perfect-square
/// endpoints are returned exactly. Throws DomainError when a.lo < 0.
Interval sqrt(const Interval& a, const Rational& width_target);

/// Default surd width used at top level.
Rational default_sqrt_width();

std::ostream& operator<<(std::ostream& os, const Interval& iv);

}  // namespace lec
