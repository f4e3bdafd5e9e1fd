// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "lec/errors.hpp"
#include "lec/poly.hpp"
#include "lec/ratfunc.hpp"

using lec::Bindings;
using lec::Interval;
using lec::Monomial;
using lec::PolyExpr;
using lec::RatFunc;
using lec::Rational;
using lec::Var;

namespace {

const PolyExpr n = PolyExpr::var(Var::n);
const PolyExpr d1 = PolyExpr::var(Var::d1);
const PolyExpr d2 = PolyExpr::var(Var::d2);
const PolyExpr x = PolyExpr::var(Var::x);

PolyExpr A3() {
  return PolyExpr::parse(
      "4*n^4 + 4*(2 - 3*d1 - d2)*n^3 + (-44*d1 + 7*d1^2 + 12*d2 + 10*d1*d2 - d2^2)*n^2"
      " + (-4*d1 + 54*d1^2 + 4*d2 - 20*d1*d2 - 2*d2^2)*n + 8*d1*(d1 - d2)");
}

PolyExpr random_poly(std::mt19937_64& rng, int terms, unsigned max_deg) {
  std::uniform_int_distribution<unsigned> e(0, max_deg);
  std::uniform_int_distribution<long> c(-9, 9), den(1, 4);
  std::vector<lec::Term> ts;
  for (int i = 0; i < terms; ++i) ts.push_back({Monomial::of(e(rng), e(rng), e(rng)), Rational::of(c(rng), den(rng))});
  return PolyExpr::from_terms(ts);
}

Bindings<Rational> point(const Rational& a, const Rational& b, const Rational& c) {
  Bindings<Rational> p;
  p[0] = a;
  p[1] = b;
  p[2] = c;
  return p;
}

RatFunc mu(const RatFunc& nn, const RatFunc& xx) {
  return ((nn + 2) * nn + (nn * nn - 3 * nn - 1) * xx - nn * (nn + 2) * xx * xx / 4) / ((nn - 1) * (nn - 1));
}

}  // namespace

TEST_CASE("poly_arith examples") {
  CHECK((n - 2 * d1) * (n + 2 * d1) == n * n - 4 * d1 * d1);
  CHECK((x - x).is_zero());
  RatFunc sum = RatFunc::ratio(1, n - 1) + RatFunc::ratio(1, n + 1);
  CHECK(sum == RatFunc::ratio(2 * n, n * n - 1));
  CHECK(sum.den_factors().size() == 2);
  CHECK(((n - 2 * d1) * (n + 2 * d1)).str() == "n^2 - 4*d1^2");
}

TEST_CASE("serialization") {
  CHECK(PolyExpr().str() == "0");
  CHECK(PolyExpr::parse("n^2 - 4*d1^2").str() == "n^2 - 4*d1^2");
  CHECK(PolyExpr::parse("3/2*n - d2 + 1/3").str() == "3/2*n - d2 + 1/3");
  CHECK_THROWS_AS(PolyExpr::parse("n + "), lec::ParseError);
  CHECK_THROWS_AS(PolyExpr::parse("1/n"), lec::ParseError);
  try {
    PolyExpr::parse("n + q");
    FAIL("expected parse error");
  } catch (const lec::ParseError& e) {
    CHECK(e.position() == 4);
  }
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    PolyExpr p = random_poly(rng, 12, 6);
    CHECK(PolyExpr::parse(p.str()) == p);
    CHECK(PolyExpr::from_json(p.to_json()) == p);
  }
  CHECK(PolyExpr::parse("x^2 + n").to_json() ==
        R"({"terms":[{"c":"1","e":[0,0,0,2]},{"c":"1","e":[1,0,0,0]}],"vars":["n","d1","d2","x"]})");
  RatFunc f = RatFunc::ratio(n * n + 1, (n - 2 * d1) * (n - 1).pow(2));
  CHECK(RatFunc::parse(f.str()) == f);
}

TEST_CASE("canonical term order is graded lex n > d1 > d2") {
  PolyExpr p = d2 * d2 + n + d1 * d1 * d1 + n * d2 + 5;
  std::vector<std::string> order;
  for (const auto& t : p.terms()) order.push_back(t.mono.str());
  CHECK(order == std::vector<std::string>{"d1^3", "n*d2", "d2^2", "n", "1"});
}

TEST_CASE("substitute examples") {
  Bindings<RatFunc> b;
  b[3] = RatFunc(n - 1);
  CHECK(RatFunc(x * x).substitute(b) == RatFunc(n * n - 2 * n + 1));
  RatFunc xi = mu(RatFunc(n), RatFunc(x)) - RatFunc(x);
  RatFunc closed = RatFunc((n + 2) * (-n * x * x - 4 * x + 4 * n)) / RatFunc(4 * (n - 1) * (n - 1));
  CHECK(xi == closed);
  RatFunc r = RatFunc(-3 * (d1 - d2)) / RatFunc(n - 2 * d2);
  Bindings<RatFunc> at;
  at[0] = RatFunc(13);
  at[1] = RatFunc(1);
  at[2] = RatFunc(0);
  RatFunc rv = r.substitute(at);
  CHECK(rv.is_polynomial());
  CHECK(rv.as_polynomial().constant_value() == Rational::of(-3, 13));
  Bindings<RatFunc> bad;
  bad[0] = RatFunc(2 * d2);
  CHECK_THROWS_AS(r.substitute(bad), lec::DomainError);
}

TEST_CASE("eval_exact examples") {
  Bindings<Rational> p;
  p[0] = Rational(13);
  p[3] = Rational(0);
  CHECK(mu(RatFunc(n), RatFunc(x)).eval_exact(p) == Rational::of(65, 48));
  CHECK((n - 2 * d1).eval(point(5, 1, 0)) == Rational(3));
  // A3 at n = 2, d1 = d2 = 0 is 4*16 + 8*8 = 128.
  CHECK(A3().eval(point(2, 0, 0)) == Rational(128));
  CHECK(A3().eval(point(2, 1, 0)) == Rational(-8));
  CHECK_THROWS_AS(RatFunc::ratio(1, n - 1).eval_exact(point(1, 0, 0)), lec::PoleError);
}

TEST_CASE("eval_interval examples") {
  Bindings<Interval> box;
  box[1] = Interval(0, 2);
  CHECK(Interval(0, 1).subset_of((d1 * (2 - d1)).eval_interval(box)));
  CHECK(PolyExpr(5).eval_interval(box) == Interval(5));
  box[0] = Interval(13);
  box[1] = Interval(0, 1);
  CHECK((n - 2 * d1).eval_interval(box) == Interval(11, 13));
  Bindings<Interval> pole;
  pole[0] = Interval(0, 2);
  CHECK(!RatFunc::ratio(1, n - 1).eval_interval(pole));
}

TEST_CASE("collect_n examples") {
  auto parts = A3().collect_n();
  REQUIRE(parts.size() == 5);
  CHECK(parts[0].first == 4);
  CHECK(parts[0].second == PolyExpr(4));
  CHECK(parts[1].second == 8 - 12 * d1 - 4 * d2);
  CHECK(parts[2].second == PolyExpr::parse("-44*d1 + 7*d1^2 + 12*d2 + 10*d1*d2 - d2^2"));
  CHECK(parts[3].second == PolyExpr::parse("-4*d1 + 54*d1^2 + 4*d2 - 20*d1*d2 - 2*d2^2"));
  CHECK(parts[4].first == 0);
  CHECK(parts[4].second == 8 * d1 * (d1 - d2));
  auto c = PolyExpr(7).collect_n();
  REQUIRE(c.size() == 1);
  CHECK(c[0].first == 0);
  auto l = (n * d1 + n).collect_n();
  REQUIRE(l.size() == 1);
  CHECK(l[0].first == 1);
  CHECK(l[0].second == d1 + 1);
}

TEST_CASE("clear_denominators tracks factors") {
  auto c = lec::clear_denominators(RatFunc::ratio(1, n - 1));
  CHECK(c.num == PolyExpr(1));
  CHECK(c.den == n - 1);
  CHECK(c.sign_domain == "den > 0 for n > 1");
  RatFunc a = RatFunc::ratio(d1, n - 2 * d1), b = RatFunc::ratio(d2, n + 2 * d2);
  auto m = lec::clear_denominators(a * b);
  CHECK(m.factors.size() == 2);
  CHECK(m.num == d1 * d2);
}

TEST_CASE("factored arithmetic cancels known factors") {
  RatFunc p = RatFunc::ratio(n + 2 * d1, n - 2 * d1);
  RatFunc one = p / p;
  CHECK(one.factors().empty());
  CHECK(one == RatFunc(1));
  RatFunc back = p * RatFunc(n - 2 * d1);
  CHECK(back.is_polynomial());
  CHECK(back.num() == n + 2 * d1);
  RatFunc f = RatFunc((n - 1) * (n + 3)) / RatFunc(n - 1).pow(3);
  RatFunc g = f.normalized();
  CHECK(g == f);
  REQUIRE(g.den_factors().size() == 1);
  CHECK(g.den_factors()[0].mult == 2);
}

TEST_CASE("ring axioms on random instances") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    PolyExpr a = random_poly(rng, 4, 3), b = random_poly(rng, 4, 3), c = random_poly(rng, 4, 3);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("divide_exact") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    PolyExpr a = random_poly(rng, 5, 3), b = random_poly(rng, 4, 2);
    if (b.is_zero()) continue;
    auto q = (a * b).divide_exact(b);
    REQUIRE(q);
    CHECK(*q == a);
  }
  CHECK(!(n * n + 1).divide_exact(n - 1));
  CHECK(lec::surely_not_divisible(n * n + 1, n - 1));
  CHECK(!lec::surely_not_divisible((n - 2 * d1) * (d2 + 3), n - 2 * d1));
}

TEST_CASE("eval commutes with substitute") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> v(-20, 20), w(1, 9);
  for (int i = 0; i < 300; ++i) {
    PolyExpr f = random_poly(rng, 6, 3);
    PolyExpr g1 = random_poly(rng, 3, 2), g2 = random_poly(rng, 3, 2);
    Bindings<PolyExpr> b;
    b[1] = g1;
    b[2] = g2;
    PolyExpr h = f.substitute(b);
    auto pt = point(Rational::of(v(rng), w(rng)), Rational::of(v(rng), w(rng)), Rational::of(v(rng), w(rng)));
    auto inner = point(*pt[0], g1.eval(pt), g2.eval(pt));
    CHECK(h.eval(pt) == f.eval(inner));
    RatFunc rf = RatFunc::ratio(f, g1 * g1 + 1);
    Bindings<RatFunc> rb;
    rb[2] = RatFunc(g2);
    auto rinner = point(*pt[0], *pt[1], g2.eval(pt));
    CHECK(rf.substitute(rb).eval_exact(pt) == rf.eval_exact(rinner));
  }
}

TEST_CASE("eval_interval soundness") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> v(-30, 30), t(0, 64);
  for (int i = 0; i < 100; ++i) {
    PolyExpr f = random_poly(rng, 8, 4);
    Bindings<Interval> box;
    Bindings<Rational> lo;
    for (int k = 0; k < 3; ++k) {
      Rational a = Rational::of(v(rng), 8);
      box[k] = Interval(a, a + Rational::of(t(rng) + 1, 32));
    }
    Interval enc = f.eval_interval(box);
    for (int j = 0; j < 10; ++j) {
      Bindings<Rational> p;
      for (int k = 0; k < 3; ++k) p[k] = box[k]->lo() + box[k]->width() * Rational::of(t(rng), 64);
      CHECK(enc.contains(f.eval(p)));
    }
  }
}

TEST_CASE("collect reassembly") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 300; ++i) {
    PolyExpr f = random_poly(rng, 10, 5);
    CHECK(lec::assemble(Var::n, f.collect_n()) == f);
    CHECK(lec::assemble(Var::d2, f.collect(Var::d2)) == f);
  }
}

TEST_CASE("derivative") {
  CHECK(PolyExpr::parse("n^3*d1 + 2*d1^2").derivative(Var::d1) == PolyExpr::parse("n^3 + 4*d1"));
}
