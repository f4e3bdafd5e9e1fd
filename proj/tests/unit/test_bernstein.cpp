// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "lec/bernstein.hpp"
#include "lec/errors.hpp"

using lec::BernsteinPatch;
using lec::Bindings;
using lec::Interval;
using lec::PolyExpr;
using lec::Rational;
using lec::Var;

namespace {

PolyExpr random_poly(std::mt19937_64& rng, int terms, unsigned max_deg) {
  std::uniform_int_distribution<unsigned> e(0, max_deg);
  std::uniform_int_distribution<long> c(-9, 9);
  std::vector<lec::Term> ts;
  for (int i = 0; i < terms; ++i) ts.push_back({lec::Monomial::of(0, e(rng), e(rng), e(rng)), Rational(c(rng))});
  return PolyExpr::from_terms(ts);
}

Rational eval3(const PolyExpr& p, const Rational& a, const Rational& b, const Rational& c) {
  Bindings<Rational> pt;
  pt[1] = a;
  pt[2] = b;
  pt[3] = c;
  return p.eval(pt);
}

}  // namespace

TEST_CASE("bernstein range of x(1-x) on [0,1]") {
  PolyExpr x = PolyExpr::var(Var::d1);
  auto b = BernsteinPatch::build(x * (1 - x), {Var::d1}, {Interval(0, 1)});
  CHECK(b.range() == Interval(0, Rational::of(1, 2)));
  auto [l, h] = b.split(0);
  CHECK(l.range().contains(Rational::of(3, 16)));
  CHECK(l.range().hi() <= Rational::of(1, 4));
  CHECK(l.corner(1) == Rational::of(1, 4));
}

TEST_CASE("bernstein enclosure, corners and splits agree with exact values") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> v(-16, 16), t(0, 32);
  const std::vector<Var> vars{Var::d1, Var::d2, Var::x};
  for (int i = 0; i < 60; ++i) {
    PolyExpr p = random_poly(rng, 7, 4);
    std::vector<Interval> box;
    for (int k = 0; k < 3; ++k) {
      Rational a = Rational::of(v(rng), 8);
      box.emplace_back(a, a + Rational::of(t(rng) + 1, 16));
    }
    auto b = BernsteinPatch::build(p, vars, box);
    for (unsigned mask = 0; mask < 8; ++mask) {
      const Rational& a = (mask & 1) ? box[0].hi() : box[0].lo();
      const Rational& c = (mask & 2) ? box[1].hi() : box[1].lo();
      const Rational& e = (mask & 4) ? box[2].hi() : box[2].lo();
      CHECK(b.corner(mask) == eval3(p, a, c, e));
    }
    BernsteinPatch cur = b;
    std::vector<Interval> cbox = box;
    for (int depth = 0; depth < 6; ++depth) {
      std::size_t axis = depth % 3;
      auto [lo, hi] = cur.split(axis);
      Rational mid = cbox[axis].mid();
      bool upper = t(rng) % 2;
      cbox[axis] = upper ? Interval(mid, cbox[axis].hi()) : Interval(cbox[axis].lo(), mid);
      cur = upper ? hi : lo;
      CHECK(cur.corner(0) == eval3(p, cbox[0].lo(), cbox[1].lo(), cbox[2].lo()));
      CHECK(cur.corner(7) == eval3(p, cbox[0].hi(), cbox[1].hi(), cbox[2].hi()));
      Interval r = cur.range();
      for (int j = 0; j < 20; ++j) {
        Rational a = cbox[0].lo() + cbox[0].width() * Rational::of(t(rng), 32);
        Rational c = cbox[1].lo() + cbox[1].width() * Rational::of(t(rng), 32);
        Rational e = cbox[2].lo() + cbox[2].width() * Rational::of(t(rng), 32);
        CHECK(r.contains(eval3(p, a, c, e)));
      }
    }
  }
}

TEST_CASE("bernstein rejects foreign variables") {
  CHECK_THROWS_AS(BernsteinPatch::build(PolyExpr::var(Var::n), {Var::d1}, {Interval(0, 1)}), lec::DomainError);
}
