/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#pragma once

#include <array>

#include "lec/errors.hpp"
#include "lec/interval.hpp"

namespace lec {

/// Interval value together with an interval enclosure of its gradient with
/// respect to two box coordinates (forward-mode differentiation). Used for
/// mean-value enclosures of the surd-bearing coefficients.
///
/// Every product and quotient is rounded outward to the 2^-bits grid when
/// `bits > 0`, which keeps denominators bounded during deep subdivision.
class IvDual {
 public:
  static constexpr std::size_t kDims = 2;
  using Grad = std::array<Interval, kDims>;

  IvDual() : v_(0), g_{Interval(0), Interval(0)} {}
  IvDual(const Interval& v) : v_(v), g_{Interval(0), Interval(0)} {}  // NOLINT(google-explicit-constructor)
  IvDual(const Rational& v) : IvDual(Interval(v)) {}  // NOLINT(google-explicit-constructor)
  IvDual(int v) : IvDual(Interval(v)) {}  // NOLINT(google-explicit-constructor)
  IvDual(const Interval& v, const Grad& g) : v_(v), g_(g) {}

  /// The coordinate `axis` ranging over `range`.
  static IvDual variable(std::size_t axis, const Interval& range) {
    IvDual d(range);
    d.g_[axis] = Interval(1);
    return d;
  }

  const Interval& value() const { return v_; }
  const Grad& grad() const { return g_; }

  static long& bits() {
    static thread_local long b = 0;
    return b;
  }

  IvDual operator-() const { return IvDual(-v_, {-g_[0], -g_[1]}); }
  IvDual& operator+=(const IvDual& o) {
    v_ += o.v_;
    for (std::size_t i = 0; i < kDims; ++i) g_[i] += o.g_[i];
    return *this;
  }
  IvDual& operator-=(const IvDual& o) {
    v_ -= o.v_;
    for (std::size_t i = 0; i < kDims; ++i) g_[i] -= o.g_[i];
    return *this;
  }
  IvDual& operator*=(const IvDual& o) {
    for (std::size_t i = 0; i < kDims; ++i) g_[i] = round(g_[i] * o.v_ + v_ * o.g_[i]);
    v_ = round(v_ * o.v_);
    return *this;
  }
  /// Throws DomainError when the divisor's enclosure contains zero.
  IvDual& operator/=(const IvDual& o) {
    Interval q = v_ / o.v_;
    for (std::size_t i = 0; i < kDims; ++i) g_[i] = round((g_[i] - q * o.g_[i]) / o.v_);
    v_ = round(q);
    return *this;
  }

  friend IvDual operator+(IvDual a, const IvDual& b) { return a += b; }
  friend IvDual operator-(IvDual a, const IvDual& b) { return a -= b; }
  friend IvDual operator*(IvDual a, const IvDual& b) { return a *= b; }
  friend IvDual operator/(IvDual a, const IvDual& b) { return a /= b; }

  IvDual sqr() const {
    IvDual r(*this);
    for (std::size_t i = 0; i < kDims; ++i) r.g_[i] = round(Interval(2) * v_ * g_[i]);
    r.v_ = round(v_.sqr());
    return r;
  }

  /// Value enclosure over a box of half-widths `radius` around the point
  /// where `at_center` was evaluated: f(c) + grad(box) . [-radius, radius].
  static Interval mean_value(const Interval& at_center, const Grad& grad_on_box, const std::array<Rational, kDims>& radius) {
    Interval r = at_center;
    for (std::size_t i = 0; i < kDims; ++i) r += grad_on_box[i] * Interval(-radius[i], radius[i]);
    return r;
  }

 private:
  static Interval round(const Interval& x) { return bits() > 0 ? x.round_out(bits()) : x; }

  Interval v_;
  Grad g_;
};

/// Enclosure of sqrt(a). The derivative needs a strictly positive argument.
inline IvDual sqrt(const IvDual& a, const Rational& width) {
  Interval s = sqrt(a.value(), width);
  IvDual::Grad g = a.grad();
  bool constant = true;
  for (const auto& gi : g) constant = constant && gi == Interval(0);
  if (constant) return IvDual(s);
  if (!s.positive()) throw DomainError("sqrt: argument enclosure touches zero");
  for (auto& gi : g) gi = gi / (Interval(2) * s);
  return IvDual(s, g);
}

}  // namespace lec
