// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "lec/coefficients.hpp"

using namespace lec;

namespace {

RatFunc V(Var v) { return RatFunc::var(v); }
const RatFunc N = RatFunc::var(Var::n);

Rational R(long a, long b = 1) { return Rational::of(a, b); }

}  // namespace

TEST_CASE("exponents_from_d examples") {
  auto e = exponents_from_d(5, 1, 1);
  CHECK(e.p == R(7, 3));
  CHECK(e.q == R(7, 3));
  auto z = exponents_from_d(7, 0, 0);
  CHECK(z.p == 1);
  CHECK(z.q == 1);
  CHECK_FALSE(z.alpha.has_value());
  CHECK_FALSE(z.beta.has_value());
  auto t = exponents_from_d(13, 1, 0);
  CHECK(t.p == R(15, 11));
  CHECK(t.q == 1);
  CHECK(t.sobolev_gap == R(1, 13));
  CHECK_THROWS_AS(exponents_from_d(6, 3, 0), DomainError);
  CHECK_THROWS_AS(exponents_from_d(2, 0, 0), DomainError);
}

TEST_CASE("exponent invariants") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> num(-400, 999), nn(5, 40);
  for (int i = 0; i < 1000; ++i) {
    long n = nn(rng);
    Rational d1 = R(num(rng), 500), d2 = R(num(rng), 500);
    auto e = exponents_from_d(n, d1, d2);
    CHECK(Rational(1) / (e.p + 1) == R(1, 2) - d1 / Rational(n));
    CHECK(Rational(1) / (e.q + 1) == R(1, 2) - d2 / Rational(n));
    CHECK((e.p >= 1) == (d1.sign() >= 0));
    CHECK((e.q >= 1) == (d2.sign() >= 0));
    // round trip of the parametrization
    CHECK(Rational(n) * (e.p - 1) / (2 * (e.p + 1)) == d1);
    if (e.alpha) {
      CHECK(*e.alpha == 2 * (e.p + 1) / (e.p * e.q - 1));
      CHECK(*e.beta == 2 * (e.q + 1) / (e.p * e.q - 1));
    }
    CHECK(e.sobolev_gap == Rational(1) / (e.p + 1) + Rational(1) / (e.q + 1) - (1 - R(2, n)));
  }
}

TEST_CASE("mu and xi closed values") {
  CHECK(mu(N, RatFunc(0)) == RatFunc::parse("n*(n+2)/(n-1)^2"));
  CHECK(mu(N, RatFunc(-6) / N) == RatFunc::parse("(n^3-4*n^2+9*n-12)/(n*(n-1)^2)"));
  CHECK(mu(N, RatFunc(-3) / (RatFunc(2) * N)) == RatFunc::parse("(16*n^3+8*n^2+63*n+6)/(16*(n-1)^2*n)"));
  CHECK(mu<Rational>(13, 0) == R(195, 144));
  RatFunc x = V(Var::x);
  CHECK(xi(N, x) == xi_closed(N, x));
}

TEST_CASE("obata_margin and scaling_exponent") {
  CHECK(obata_margin<Rational>(9, 0) == 0);
  CHECK(obata_margin<Rational>(13, R(-3, 13)) == R(927, 114244));
  CHECK(obata_margin<Rational>(13, R(1, 11)) == R(11359, 9897316));
  CHECK(scaling_exponent(13, 1, 0) == -14);
  for (long n : {3, 7, 40}) CHECK(scaling_exponent(n, 1, 1) == -2);
  CHECK(scaling_exponent(20, R(3, 2), R(1, 4)) < 0);
  CHECK_THROWS_AS(scaling_exponent(13, 0, 0), DomainError);
}

TEST_CASE("scheme1 at (13,1,0)") {
  auto c = scheme1(13, 1, 0);
  CHECK(c.r == R(-3, 13));
  CHECK(c.s == R(1, 11));
  CHECK(c.p == R(15, 11));
  CHECK(c.k1 == R(-751, 624));
  CHECK(c.k2 == R(-5971, 5808));
  CHECK(c.theta1 == R(7469, 7488));
  CHECK(c.theta2 == R(31175, 23232));
  CHECK(c.delta1 == R(693557, 4672512));
  CHECK(c.delta2 == R(12, 121));
  CHECK(c.alpha1 == R(309, 140608));
  CHECK(c.alpha2 == R(11359, 36543936));
  CHECK(c.beta1 == R(6640620, 693557));
  CHECK(c.beta2 == R(31175, 2288));
  CHECK(c.gamma1 == R(73068480, 7629127));
  CHECK(c.gamma2 == R(33287, 2496));
  CHECK(c.A1 == R(553385, 405936));
  CHECK(c.A2 == R(374100, 366157));
  Rational F = c.A1 * c.A2 - c.p * c.q;
  CHECK(F == R(361287835, 12386358996));
  CHECK(F > 0);
  CHECK(c.beta1 * c.beta2 - c.gamma1 * c.gamma2 == R(1083863505, 396714604));
  CHECK(side_conditions_hold(c));
  // bridging identities
  CHECK(c.L1 * 13 / 12 == c.mu_r);
  CHECK(c.A1 == c.p * c.beta1 / c.gamma1);
  CHECK(c.A2 == c.q * c.beta2 / c.gamma2);
}

TEST_CASE("scheme1 degenerate points") {
  auto c = scheme1(13, R(1, 2), R(1, 2));
  CHECK(c.r == 0);
  CHECK(c.s == 0);
  try {
    scheme1(13, 0, 0);
    FAIL("expected degenerate point");
  } catch (const DegeneratePointError& e) {
    CHECK(e.quantity() == "delta1");
  }
  CHECK_THROWS_AS(scheme1(13, 0, R(1, 2)), DomainError);
  CHECK_THROWS_AS(scheme1(13, 7, 0), DomainError);
}

TEST_CASE("scheme1 symbolic identity suite") {
  auto c = scheme1_symbolic();
  RatFunc n = N;
  auto f1 = scheme1_closed(n, c.r, c.p, c.mu_r);
  auto f2 = scheme1_closed(n, c.s, c.q, c.mu_s);
  CHECK((c.A1 - f1.A).is_zero());
  CHECK((c.A2 - f2.A).is_zero());
  CHECK((c.delta1 - f1.delta).is_zero());
  CHECK((c.delta2 - f2.delta).is_zero());
  CHECK((c.A1 - c.p - f1.A_minus_p).is_zero());
  CHECK((c.A2 - c.q - f2.A_minus_p).is_zero());
  CHECK((c.alpha1 - f1.alpha).is_zero());
  CHECK((c.alpha2 - f2.alpha).is_zero());
  CHECK((n * c.L1 / (n - RatFunc(1)) - c.mu_r).is_zero());
  CHECK((n * c.L2 / (n - RatFunc(1)) - c.mu_s).is_zero());
  CHECK(((c.r + RatFunc(2)) / (c.q + RatFunc(1)) - (c.s + RatFunc(2)) / (c.p + RatFunc(1))).is_zero());
  // alpha from the obata margin: n/(4(n-1)) scaling
  CHECK((c.alpha1 - obata_margin(n, c.r) * n / (RatFunc(4) * (n - RatFunc(1)))).is_zero());
}

TEST_CASE("scaling relation (r+2) alpha = (s+2) beta") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(1, 399), n_d(13, 60);
  for (int i = 0; i < 300; ++i) {
    long n = n_d(rng);
    Rational a = R(num(rng), 200), b = R(num(rng), 200);
    Rational d1 = max(a, b), d2 = min(a, b);
    if (d1 == d2) continue;
    auto e = exponents_from_d(n, d1, d2);
    auto sh = shifts<Rational>(Rational(n), d1, d2);
    REQUIRE(e.alpha.has_value());
    CHECK((sh.r + 2) * *e.alpha == (sh.s + 2) * *e.beta);
  }
}

TEST_CASE("range bounds of r and s with c0 = 4") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> n_d(13, 200), u(0, 1 << 20);
  int tested = 0;
  while (tested < 1000) {
    long n = n_d(rng);
    Rational top = 2 - R(4, n);
    Rational d2 = top / 2 * R(u(rng), 1 << 20);
    Rational d1 = d2 + (top - 2 * d2) * R(u(rng), 1 << 20);
    if (!(d2 < d1 && d1 <= top - d2)) continue;
    ++tested;
    auto sh = shifts<Rational>(Rational(n), d1, d2);
    CHECK(R(-6, n) < -3 * d1 / Rational(n));
    CHECK(-3 * d1 / Rational(n) <= sh.r);
    CHECK(sh.r < 0);
    CHECK(sh.s > 0);
    CHECK(sh.s <= d1 / (Rational(n) - 2 * d1));
    CHECK(d1 / (Rational(n) - 2 * d1) < R(2, n - 4));
  }
}

TEST_CASE("scheme2 at eps0 = 0") {
  Rational w = Rational::pow2(-40);
  for (long n = 5; n <= 12; ++n) {
    Rational d1 = R(1, 2), d2 = R(1, 8);
    auto c = scheme2(n, d1, d2, 0, w);
    CHECK(c.alpha1.contains(Rational(0)));
    CHECK(c.alpha2.contains(Rational(0)));
    CHECK(c.alpha1.width() <= 2 * w);
    CHECK(c.alpha2.width() <= 2 * w);
    CHECK(c.scheme == Scheme::II);
    REQUIRE(c.rho1.has_value());
    CHECK(c.rho1->positive());
    CHECK(c.rho2->positive());
  }
  // width shrinks linearly
  auto a = scheme2(7, R(3, 4), 0, 0, Rational::pow2(-20));
  auto b = scheme2(7, R(3, 4), 0, 0, Rational::pow2(-30));
  CHECK(b.alpha1.width() <= a.alpha1.width() * Rational::pow2(-9));
  CHECK(b.alpha1.width() <= 2 * Rational::pow2(-30));
}

TEST_CASE("scheme2 at (5, 3/2, 0)") {
  // Values frozen from an independent high-precision evaluation.
  auto c = scheme2(5, R(3, 2), 0, 0, default_sqrt_width());
  CHECK(c.gamma1.positive());
  CHECK(c.gamma2.positive());
  CHECK(c.beta1.positive());
  CHECK(c.beta2.positive());
  CHECK((c.gamma1 - Interval(Rational::parse("5.6508755395367510985"))).lo().abs() < Rational::parse("1e-15"));
  CHECK((c.beta1 - Interval(Rational::parse("4.2430171597369656402"))).lo().abs() < Rational::parse("1e-15"));
  CHECK((c.delta1 - Interval(Rational::parse("0.80024393003643825996"))).lo().abs() < Rational::parse("1e-15"));
  CHECK(c.delta2 == Interval(Rational::parse("1.3125")));
  // The point has d1 + d2 above 2 - 4/5; the product condition fails there.
  Interval bg = c.beta1 * c.beta2 - c.gamma1 * c.gamma2;
  CHECK(bg.negative());
  CHECK((bg - Interval(Rational::parse("-0.86553952892071297123"))).lo().abs() < Rational::parse("1e-15"));
  // Inside the region the same choice works.
  auto in = scheme2(5, R(1, 2), R(1, 10), 0, default_sqrt_width());
  CHECK((in.beta1 * in.beta2 - in.gamma1 * in.gamma2).positive());
}

TEST_CASE("scheme2 eps0 direction") {
  auto a0 = scheme2(6, R(3, 5), R(1, 10), 0, default_sqrt_width());
  auto a1 = scheme2(6, R(3, 5), R(1, 10), Rational::parse("1e-6"), default_sqrt_width());
  CHECK(a1.alpha1.lo() > a0.alpha1.mid());
  CHECK(a1.alpha2.lo() > a0.alpha2.mid());
  CHECK(a1.alpha1.positive());
  CHECK_THROWS_AS(scheme2(6, R(3, 5), 0, -1, default_sqrt_width()), DomainError);
}

TEST_CASE("completed-square alpha equals the defining quadratic") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> u(-1000, 1000), n_d(5, 12);
  for (int i = 0; i < 500; ++i) {
    Rational n(n_d(rng)), x = R(u(rng), 997), k = R(u(rng), 311);
    Rational def = -(n - 1) / n * k * k + k * (x - 1) - x * (x - 1) / 2;
    Rational c = n * (x - 1) / (2 * (n - 1));
    Rational sq = -(n - 1) / n * (k - c) * (k - c) + n * surd_argument(n, x) / (4 * (n - 1));
    CHECK(def == sq);
  }
}

TEST_CASE("ivdual enclosures contain point values") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<long> u(0, 1000);
  for (int i = 0; i < 200; ++i) {
    Rational lo1 = R(u(rng), 2000) + R(1, 10), hi1 = lo1 + R(u(rng) + 1, 100000);
    Rational lo2 = R(0), hi2 = min(lo1, R(1, 50));
    Interval b1(lo1, hi1), b2(lo2, hi2);
    auto box = scheme2_generic<IvDual>(IvDual(6), IvDual::variable(0, b1), IvDual::variable(1, b2), 0, Rational::pow2(-60));
    Rational x1 = lo1 + (hi1 - lo1) * R(u(rng), 1000), x2 = lo2 + (hi2 - lo2) * R(u(rng), 1000);
    auto pt = scheme2(6, x1, x2, 0, Rational::pow2(-60));
    CHECK(box.A1.value().contains(pt.A1.mid()));
    CHECK(box.gamma1.value().contains(pt.gamma1.mid()));
    CHECK(box.delta1.value().contains(pt.delta1.mid()));
    CHECK(box.alpha2.value().contains(pt.alpha2.mid()));
  }
}

TEST_CASE("coefficient json") {
  auto c = scheme1(13, 1, 0);
  std::string j = to_json(c, 13, 1, 0);
  CHECK(j.find("\"r\"") != std::string::npos);
  CHECK(j.find("-3/13") != std::string::npos);
  CHECK(j.find("\"schema\": \"lec/1\"") != std::string::npos);
  auto c2 = scheme2(7, R(1, 2), 0, 0, default_sqrt_width());
  std::string j2 = to_json(c2, 7, R(1, 2), 0);
  CHECK(j2.find("rho1") != std::string::npos);
}
