/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#pragma once

#include <utility>
#include <vector>

#include "lec/interval.hpp"
#include "lec/poly.hpp"

namespace lec {

/// Tensor-product Bernstein coefficients of a polynomial over a box in up to
/// a handful of variables. Coefficients are held as integers times one
/// positive rational scale, and midpoint subdivision is done with integer
/// de Casteljau sums, so every split is exact.
class BernsteinPatch {
 public:
  /// `p` may only use the variables in `vars`; `box[i]` spans `vars[i]`.
  static BernsteinPatch build(const PolyExpr& p, const std::vector<Var>& vars, const std::vector<Interval>& box);

  std::size_t dims() const { return deg_.size(); }
  const std::vector<unsigned>& degrees() const { return deg_; }

  /// [min coefficient, max coefficient]; contains the range of p over the box.
  Interval range() const;
  Rational min_coefficient() const;
  /// Exact value of p at the box corner selecting the upper end on every axis
  /// whose bit is set in `mask`.
  Rational corner(unsigned mask) const;

  /// Halves at the midpoint of `axis`: (lower half, upper half).
  std::pair<BernsteinPatch, BernsteinPatch> split(std::size_t axis) const;

 private:
  std::size_t stride(std::size_t axis) const;
  void reduce();

  std::vector<unsigned> deg_;
  std::vector<Integer> coeff_;  // row-major, last axis fastest
  Rational scale_;
};

}  // namespace lec
