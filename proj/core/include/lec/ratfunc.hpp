/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lec/poly.hpp"

namespace lec {

struct Factor {
  PolyExpr poly;  // primitive, positive leading coefficient, non-constant
  int mult = 1;
};

/// Rational function kept as c * prod F_i^{e_i}: a rational constant times
/// canonical primitive polynomial factors with nonzero integer exponents.
/// Products, quotients and powers only move exponents, so known factors
/// cancel without expansion. A sum is brought over the common factored
/// part and its remainder becomes one new factor; it is not otherwise
/// reduced. `normalized()` splits factors that divide one another.
class RatFunc {
 public:
  RatFunc() = default;
  RatFunc(const PolyExpr& p);  // NOLINT(google-explicit-constructor)
  RatFunc(const Rational& c) : RatFunc(PolyExpr(c)) {}  // NOLINT(google-explicit-constructor)
  RatFunc(int c) : RatFunc(PolyExpr(c)) {}  // NOLINT(google-explicit-constructor)
  static RatFunc var(Var v) { return RatFunc(PolyExpr::var(v)); }
  /// num / den; throws DomainError when den is the zero polynomial.
  static RatFunc ratio(const PolyExpr& num, const PolyExpr& den);

  /// Expressions over numbers, n, d1, d2, x with + - * / ^ and parentheses.
  /// Exponents are integers (negative allowed). Throws ParseError.
  static RatFunc parse(std::string_view text);

  bool is_zero() const { return scale_.is_zero(); }
  bool is_polynomial() const;
  /// Throws DomainError unless is_polynomial().
  PolyExpr as_polynomial() const;

  const Rational& scale() const { return scale_; }
  const std::map<PolyExpr, int>& factors() const { return factors_; }
  /// Expanded numerator: scale times factors with positive exponent.
  PolyExpr num() const;
  /// Factors with negative exponent, reported with positive multiplicity.
  std::vector<Factor> den_factors() const;
  PolyExpr den() const;

  RatFunc operator-() const;
  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  /// Throws DomainError on division by the zero function.
  RatFunc& operator/=(const RatFunc& o);

  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  /// Mathematical equality (exact cross-multiplication of the canonical forms).
  friend bool operator==(const RatFunc& a, const RatFunc& b) { return (a - b).is_zero(); }

  RatFunc pow(int e) const;
  RatFunc normalized() const;

  /// Simultaneous substitution. Throws DomainError if a denominator factor
  /// becomes identically zero.
  RatFunc substitute(const Bindings<RatFunc>& b) const;
  RatFunc substitute(Var v, const RatFunc& value) const;

  /// Throws PoleError when a denominator factor vanishes at the point.
  Rational eval_exact(const Bindings<Rational>& point) const;
  /// nullopt when a denominator factor's enclosure contains zero.
  std::optional<Interval> eval_interval(const Bindings<Interval>& box) const;

  std::string str() const;

 private:
  void multiply_factor(const PolyExpr& f, int e);
  /// Inserts poly^e; with `split`, first peels off known factors dividing it.
  void insert_poly(const PolyExpr& p, int e, bool split);

  Rational scale_;
  std::map<PolyExpr, int> factors_;
};

/// f = num / den with the factored denominator and a note on where the
/// denominator keeps a fixed sign.
struct ClearedForm {
  PolyExpr num;
  std::vector<Factor> factors;
  PolyExpr den;
  std::string sign_domain;
};
ClearedForm clear_denominators(const RatFunc& f);

/// Canonical factor form: (primitive part, constant with f = constant * primitive).
std::pair<PolyExpr, Rational> split_content(const PolyExpr& f);

/// Cheap certificate that f does not divide p (false means "maybe").
bool surely_not_divisible(const PolyExpr& p, const PolyExpr& f);

}  // namespace lec
