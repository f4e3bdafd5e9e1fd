/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lec/interval.hpp"
#include "lec/rational.hpp"

namespace lec {

/// Polynomial variables. `x` is a free scalar slot used for generic
/// arguments (mu(x), a compactified t = 1/n, a free surd value, ...).
enum class Var : std::uint8_t { n = 0, d1 = 1, d2 = 2, x = 3 };
inline constexpr int kNumVars = 4;
inline constexpr std::array<Var, kNumVars> kAllVars{Var::n, Var::d1, Var::d2, Var::x};

std::string_view var_name(Var v);
std::optional<Var> var_from_name(std::string_view name);

/// Per-variable bindings; unbound variables stay symbolic (or are errors,
/// depending on the consumer).
template <class T>
using Bindings = std::array<std::optional<T>, kNumVars>;

/// Exponent vector packed into one word: [total | n | d1 | d2 | x], 12 bits
/// each, so integer comparison is graded lexicographic order with n > d1 > d2 > x.
class Monomial {
 public:
  static constexpr unsigned kFieldBits = 12;
  static constexpr unsigned kMaxExponent = (1u << kFieldBits) - 1;

  constexpr Monomial() = default;
  static Monomial of(unsigned e_n, unsigned e_d1 = 0, unsigned e_d2 = 0, unsigned e_x = 0);
  static Monomial var(Var v, unsigned e = 1);
  static constexpr Monomial from_key(std::uint64_t key) { return Monomial(key); }

  unsigned exponent(Var v) const {
    return static_cast<unsigned>((key_ >> shift(v)) & kMaxExponent);
  }
  unsigned degree() const { return static_cast<unsigned>(key_ >> (4 * kFieldBits)); }
  bool is_one() const { return key_ == 0; }
  std::uint64_t key() const { return key_; }

  Monomial operator*(Monomial o) const { return Monomial(key_ + o.key_); }
  bool divides(Monomial o) const;
  /// Requires divides(o).
  Monomial quotient_of(Monomial o) const { return Monomial(o.key_ - key_); }
  Monomial without(Var v) const;

  friend constexpr auto operator<=>(Monomial, Monomial) = default;

  std::string str() const;

 private:
  explicit constexpr Monomial(std::uint64_t key) : key_(key) {}
  static constexpr unsigned shift(Var v) {
    return (3 - static_cast<unsigned>(v)) * kFieldBits;
  }
  std::uint64_t key_ = 0;
};

struct Term {
  Monomial mono;
  Rational coeff;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Multivariate polynomial over Q in {n, d1, d2, x}. Terms are kept in
/// descending graded-lex order with no zero coefficients, so two equal
/// polynomials have identical term vectors.
class PolyExpr {
 public:
  PolyExpr() = default;
  PolyExpr(const Rational& c);  // NOLINT(google-explicit-constructor)
  PolyExpr(int c) : PolyExpr(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  static PolyExpr var(Var v);
  static PolyExpr monomial(const Rational& c, Monomial m);
  /// Sorts, merges duplicate monomials and drops zeros.
  static PolyExpr from_terms(std::vector<Term> terms);

  /// Text parser for polynomial expressions (see RatFunc::parse for the
  /// grammar); throws ParseError on malformed input or a non-polynomial result.
  static PolyExpr parse(std::string_view text);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  Rational constant_value() const;  // requires is_constant()
  Rational constant_term() const;
  const Term& leading() const { return terms_.front(); }

  unsigned degree(Var v) const;
  unsigned total_degree() const;
  bool uses(Var v) const { return degree(v) > 0; }

  PolyExpr operator-() const;
  PolyExpr& operator+=(const PolyExpr& o);
  PolyExpr& operator-=(const PolyExpr& o);
  PolyExpr& operator*=(const PolyExpr& o);
  /// Multiplies every coefficient by c.
  PolyExpr& scale(const Rational& c);

  friend PolyExpr operator+(PolyExpr a, const PolyExpr& b) { return a += b; }
  friend PolyExpr operator-(PolyExpr a, const PolyExpr& b) { return a -= b; }
  friend PolyExpr operator*(const PolyExpr& a, const PolyExpr& b);
  friend bool operator==(const PolyExpr&, const PolyExpr&) = default;
  /// Total order used to sort denominator factors canonically.
  friend bool operator<(const PolyExpr& a, const PolyExpr& b);

  PolyExpr pow(unsigned e) const;

  /// Positive rational c with this/c having coprime integer coefficients.
  Rational content() const;
  /// this / content, multiplied by -1 if needed so the leading coefficient is positive.
  PolyExpr primitive() const;

  /// Exact quotient when `d` divides this polynomial, nullopt otherwise.
  std::optional<PolyExpr> divide_exact(const PolyExpr& d) const;

  /// Replaces `v` by `value` (Horner in value).
  PolyExpr substitute(Var v, const PolyExpr& value) const;
  PolyExpr substitute(const Bindings<PolyExpr>& b) const;
  /// Partial derivative.
  PolyExpr derivative(Var v) const;

  /// Exact evaluation; every used variable must be bound.
  Rational eval(const Bindings<Rational>& point) const;
  /// Enclosure over a box: Horner in n over collect_n coefficients, and
  /// monomial enclosures (exact interval powers) for the remaining variables.
  Interval eval_interval(const Bindings<Interval>& box) const;

  /// Coefficients of n^i in descending i, zero entries omitted; the
  /// coefficients are free of n.
  std::vector<std::pair<unsigned, PolyExpr>> collect(Var v) const;
  std::vector<std::pair<unsigned, PolyExpr>> collect_n() const { return collect(Var::n); }

  /// Canonical text, e.g. "n^2 - 4*d1^2"; zero prints as "0".
  std::string str() const;
  /// {"vars":["n","d1","d2"],"terms":[{"e":[..],"c":"num/den"},...]}
  std::string to_json() const;
  static PolyExpr from_json(std::string_view json);

 private:
  std::vector<Term> terms_;
};

/// Sum of coeff_i * v^i.
PolyExpr assemble(Var v, const std::vector<std::pair<unsigned, PolyExpr>>& parts);

}  // namespace lec
