// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "lec/errors.hpp"
#include "lec/interval.hpp"
#include "lec/rational.hpp"

using lec::Integer;
using lec::Interval;
using lec::Rational;

namespace {

Rational random_rational(std::mt19937_64& rng, long range, long den_max) {
  std::uniform_int_distribution<long> num(-range * den_max, range * den_max);
  std::uniform_int_distribution<long> den(1, den_max);
  return Rational::of(num(rng), den(rng));
}

Interval random_interval(std::mt19937_64& rng) {
  Rational a = random_rational(rng, 5, 97), b = random_rational(rng, 5, 97);
  return a < b ? Interval(a, b) : Interval(b, a);
}

Rational random_in(std::mt19937_64& rng, const Interval& iv) {
  std::uniform_int_distribution<long> t(0, 1000);
  return iv.lo() + iv.width() * Rational::of(t(rng), 1000);
}

}  // namespace

TEST_CASE("rat_of reduces and normalizes sign") {
  CHECK(Rational::of(6, 4).str() == "3/2");
  CHECK(Rational::of(0, 7).str() == "0");
  CHECK(Rational::of(0, 7).den() == 1);
  CHECK(Rational::of(5, -10).str() == "-1/2");
  CHECK_THROWS_AS(Rational::of(1, 0), lec::DomainError);
}

TEST_CASE("rational canonical form is unique") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-60, 60);
  for (int i = 0; i < 2000; ++i) {
    long a = d(rng), b = d(rng), c = d(rng), e = d(rng);
    if (b == 0 || e == 0) continue;
    bool same = Rational::of(a, b) == Rational::of(c, e);
    CHECK(same == (a * e == b * c));
    Rational r = Rational::of(a, b);
    Integer g;
    Integer num = r.num();
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), r.den().get_mpz_t());
    CHECK((r.is_zero() ? r.den() == 1 : g == 1));
    CHECK(r.den() >= 1);
  }
}

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("3/2") == Rational::of(3, 2));
  CHECK(Rational::parse("-1/2") == Rational::of(-1, 2));
  CHECK(Rational::parse("2^-10") == Rational::pow2(-10));
  CHECK(Rational::parse("1.25") == Rational::of(5, 4));
  CHECK(Rational::parse("4e7") == Rational(40000000));
  CHECK(Rational::parse("1.5e5") == Rational(150000));
  CHECK(Rational::parse("3*2^-4") == Rational::of(3, 16));
  CHECK(Rational::parse("\xe2\x88\x92" "1/2") == Rational::of(-1, 2));
  CHECK_THROWS_AS(Rational::parse("1/0"), lec::ParseError);
  CHECK_THROWS_AS(Rational::parse("abc"), lec::ParseError);
  try {
    Rational::parse("12x");
    FAIL("expected parse error");
  } catch (const lec::ParseError& e) {
    CHECK(e.position() == 2);
  }
}

TEST_CASE("dyadic rounding brackets the value") {
  Rational x = Rational::of(1, 3);
  CHECK(x.floor_dyadic(10) <= x);
  CHECK(x.ceil_dyadic(10) >= x);
  CHECK(x.ceil_dyadic(10) - x.floor_dyadic(10) == Rational::pow2(-10));
  CHECK(Rational::of(-7, 2).floor() == -4);
  CHECK(Rational::of(-7, 2).ceil() == -3);
}

TEST_CASE("iv_arith examples") {
  CHECK(Interval(1, 2) + Interval(3, 4) == Interval(4, 6));
  CHECK(Interval(-1, 2) * Interval(3, 4) == Interval(-4, 8));
  CHECK(Interval(1, 1) / Interval(2, 4) == Interval(Rational::of(1, 4), Rational::of(1, 2)));
  CHECK_THROWS_AS(Interval(1, 2) / Interval(-1, 1), lec::DomainError);
  CHECK_THROWS_AS(Interval(2, 1), lec::DomainError);
}

TEST_CASE("iv_arith soundness fuzz") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    Interval a = random_interval(rng), b = random_interval(rng);
    Rational x = random_in(rng, a), y = random_in(rng, b);
    CHECK(a.contains(x));
    CHECK((a + b).contains(x + y));
    CHECK((a - b).contains(x - y));
    CHECK((a * b).contains(x * y));
    if (!b.contains_zero()) CHECK((a / b).contains(x / y));
    CHECK(a.sqr().contains(x * x));
    CHECK(a.pow(3).contains(x * x * x));
  }
}

TEST_CASE("iv_sqrt examples") {
  CHECK(lec::sqrt(Interval(4), Rational::pow2(-20)) == Interval(2));
  CHECK(lec::sqrt(Interval(0), Rational::pow2(-20)) == Interval(0));
  Rational w = Rational::of(1, 1000000);
  Interval s = lec::sqrt(Interval(2), w);
  CHECK(s.lo() * s.lo() <= Rational(2));
  CHECK(s.hi() * s.hi() >= Rational(2));
  CHECK(s.width() <= w);
  CHECK_THROWS_AS(lec::sqrt(Interval(-1, 1), w), lec::DomainError);
  CHECK(lec::sqrt(Interval(Rational::of(9, 4)), w) == Interval(Rational::of(3, 2)));
}

TEST_CASE("iv_sqrt containment and monotonicity") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 3000; ++i) {
    Interval a = random_interval(rng);
    if (a.lo().sign() < 0) a = Interval(a.lo().abs() < a.hi().abs() ? a.lo().abs() : Rational(0), a.hi().abs() + 1);
    Rational w = Rational::pow2(-(i % 60) - 1);
    Interval s = lec::sqrt(a, w);
    CHECK(s.lo() * s.lo() <= a.lo());
    CHECK(s.hi() * s.hi() >= a.hi());
    if (a.is_point()) CHECK(s.width() <= w);
    Interval wider(a.lo() * Rational::of(1, 2), a.hi() + 1);
    Interval sw = lec::sqrt(wider, w);
    CHECK(sw.lo() <= s.lo() + w);
    CHECK(s.hi() <= sw.hi() + w);
  }
}

TEST_CASE("outward rounding encloses") {
  Interval a(Rational::of(1, 3), Rational::of(2, 3));
  Interval r = a.round_out(8);
  CHECK(a.subset_of(r));
  CHECK(r.lo().den() <= 256);
}
