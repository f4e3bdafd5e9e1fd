/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#include <algorithm>

#include "lec/bernstein.hpp"
#include "lec/certifier.hpp"

namespace lec {

namespace {

Bindings<Rational> bind_point(const std::vector<Var>& vars, const Point& x) {
  Bindings<Rational> b;
  for (std::size_t i = 0; i < vars.size(); ++i) b[static_cast<std::size_t>(vars[i])] = x[i];
  return b;
}

class PolyFunction final : public BoxFunction {
 public:
  PolyFunction(PolyExpr p, std::vector<Var> vars) : p_(std::move(p)), vars_(std::move(vars)) {
    affine_ = p_.total_degree() <= 1 && vars_.size() == 2;
  }

  std::string description() const override { return p_.str(); }

  std::any root(const Box& box) const override {
    if (affine_) return {};
    return BernsteinPatch::build(p_, vars_, box);
  }

  std::pair<std::any, std::any> split(const std::any& state, const Box& box, std::size_t axis) const override {
    (void)box;
    if (affine_) return {state, state};
    auto [lo, hi] = std::any_cast<const BernsteinPatch&>(state).split(axis);
    return {std::any(std::move(lo)), std::any(std::move(hi))};
  }

  Interval enclose(const std::any& state, const Box& box, const Region& region) const override {
    if (!affine_) return std::any_cast<const BernsteinPatch&>(state).range();
    // Exact range over the box clipped by the shrunk region.
    std::vector<Point> poly = region.vars == vars_ ? region.clip2d(box) : std::vector<Point>{};
    if (poly.empty()) {
      Bindings<Interval> b;
      for (std::size_t i = 0; i < vars_.size(); ++i) b[static_cast<std::size_t>(vars_[i])] = box[i];
      return p_.eval_interval(b);
    }
    Rational lo = p_.eval(bind_point(vars_, poly[0])), hi = lo;
    for (const auto& v : poly) {
      Rational x = p_.eval(bind_point(vars_, v));
      lo = min(lo, x);
      hi = max(hi, x);
    }
    return Interval(lo, hi);
  }

  Interval at_point(const Point& x) const override { return Interval(p_.eval(bind_point(vars_, x))); }

 private:
  PolyExpr p_;
  std::vector<Var> vars_;
  bool affine_ = false;
};

template <class T>
T surd_value(const Coefficients<T>& c, SurdQuantity q) {
  switch (q) {
    case SurdQuantity::rho1: return *c.rho1;
    case SurdQuantity::rho2: return *c.rho2;
    case SurdQuantity::delta1: return c.delta1;
    case SurdQuantity::delta2: return c.delta2;
    case SurdQuantity::A1: return c.A1;
    case SurdQuantity::A2: return c.A2;
    case SurdQuantity::product: return c.A1 * c.A2 - c.p * c.q;
    case SurdQuantity::alpha1: return c.alpha1;
    case SurdQuantity::alpha2: return c.alpha2;
  }
  return c.A1;
}

Interval intersect(const Interval& a, const Interval& b) {
  Rational lo = max(a.lo(), b.lo()), hi = min(a.hi(), b.hi());
  if (lo > hi) return a;  // cannot happen for sound enclosures; keep the first
  return Interval(lo, hi);
}

class BitsGuard {
 public:
  explicit BitsGuard(long b) : old_(IvDual::bits()) { IvDual::bits() = b; }
  ~BitsGuard() { IvDual::bits() = old_; }

 private:
  long old_;
};

class SurdFunction final : public BoxFunction {
 public:
  SurdFunction(long n, Rational eps0, SurdQuantity q) : n_(n), eps0_(std::move(eps0)), q_(q) {}

  std::string description() const override {
    return std::string(surd_quantity_name(q_)) + " [surd scheme, n = " + std::to_string(n_) + ", eps0 = " + eps0_.str() + "]";
  }

  Interval enclose(const std::any& state, const Box& box, const Region& region) const override {
    (void)state;
    (void)region;
    BitsGuard guard(kBits);
    Rational diam = std::max(box[0].width(), box[1].width());
    Rational width = max(Rational::pow2(-64), diam * Rational::pow2(-20));
    Point c = {box[0].mid(), box[1].mid()};
    Interval at_c = surd_value(scheme2_generic<IvDual>(IvDual(n_), IvDual(c[0]), IvDual(c[1]), eps0_, width), q_).value();
    IvDual over = surd_value(
        scheme2_generic<IvDual>(IvDual(n_), IvDual::variable(0, box[0]), IvDual::variable(1, box[1]), eps0_, width), q_);
    std::array<Rational, 2> rad = {box[0].width() / 2, box[1].width() / 2};
    Interval mv = IvDual::mean_value(at_c, over.grad(), rad);
    return intersect(mv, over.value());
  }

  Interval at_point(const Point& x) const override {
    Interval v;
    for (long bits : {64L, 128L, 256L, 512L}) {
      v = surd_value(scheme2_generic<Interval>(Interval(n_), Interval(x[0]), Interval(x[1]), eps0_, Rational::pow2(-bits)), q_);
      if (!v.contains_zero() || v.is_point()) break;
    }
    return v;
  }

 private:
  static constexpr long kBits = 160;
  long n_;
  Rational eps0_;
  SurdQuantity q_;
};

}  // namespace

std::shared_ptr<BoxFunction> poly_function(const PolyExpr& p, const std::vector<Var>& vars) {
  return std::make_shared<PolyFunction>(p, vars);
}

const char* surd_quantity_name(SurdQuantity q) {
  switch (q) {
    case SurdQuantity::rho1: return "rho1";
    case SurdQuantity::rho2: return "rho2";
    case SurdQuantity::delta1: return "delta1";
    case SurdQuantity::delta2: return "delta2";
    case SurdQuantity::A1: return "A1";
    case SurdQuantity::A2: return "A2";
    case SurdQuantity::product: return "A1*A2 - p*q";
    case SurdQuantity::alpha1: return "alpha1";
    case SurdQuantity::alpha2: return "alpha2";
  }
  return "?";
}

std::shared_ptr<BoxFunction> surd_function(long n, const Rational& eps0, SurdQuantity q) {
  return std::make_shared<SurdFunction>(n, eps0, q);
}

}  // namespace lec
