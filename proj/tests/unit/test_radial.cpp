// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "lec/radial.hpp"

using namespace lec;
using namespace lec::radial;

namespace {

Rational R(long a, long b = 1) { return Rational::of(a, b); }

struct Pair {
  long n;
  Rational p, q;
};

// subcritical pairs across 3 <= n <= 8
const Pair kSubcritical[] = {
    {3, R(2), R(3)},       {3, R(4), R(5)},       {4, R(2), R(2)},       {4, R(3), R(2)},
    {5, R(2), R(2)},       {5, R(3, 2), R(2)},    {6, R(2), R(3, 2)},    {6, R(3, 2), R(3, 2)},
    {7, R(3, 2), R(4, 3)}, {8, R(3, 2), R(5, 4)},
};

}  // namespace

TEST_CASE("classify") {
  Classification c = classify(5, R(2), R(2));
  CHECK(c.kind == Criticality::subcritical);
  CHECK(c.gap == R(1, 15));
  CHECK_FALSE(c.in_theorem_region);
  CHECK(classify(3, R(5), R(5)).kind == Criticality::critical);
  CHECK(classify(3, R(6), R(5)).kind == Criticality::supercritical);
  Classification d = classify(13, R(15, 11), R(1));
  CHECK(d.kind == Criticality::subcritical);
  CHECK(d.gap == R(1, 13));
  CHECK(d.in_theorem_region);
  CHECK_THROWS_AS(classify(3, R(0), R(1)), DomainError);
}

TEST_CASE("shoot preconditions") {
  CHECK_THROWS_AS(shoot(3, R(2), R(2), 1, 1, 0), DomainError);
  CHECK_THROWS_AS(shoot(3, R(2), R(2), 0, 1, 1), DomainError);
  CHECK_THROWS_AS(shoot(3, R(2), R(2), 1, 1, 1, 0, 1e-12L), DomainError);
}

TEST_CASE("trajectory invariants") {
  Trajectory t = shoot(5, R(2), R(2), 1, 1, 100);
  REQUIRE(t.samples.size() > 2);
  CHECK(t.samples[0].r == 0);
  CHECK(t.samples[0].du == 0);
  CHECK(t.samples[0].dv == 0);
  for (std::size_t i = 1; i < t.samples.size(); ++i) {
    CHECK(t.samples[i].r > t.samples[i - 1].r);
    const auto& a = t.samples[i - 1];
    const auto& b = t.samples[i];
    if (b.u > 0 && b.v > 0) {
      CHECK(b.u < a.u);
      CHECK(b.v < a.v);
    }
  }
}

TEST_CASE("first zero of (5, 2, 2) matches an independent integration") {
  // scipy DOP853, rtol 1e-13
  Trajectory t = shoot(5, R(2), R(2), 1, 1, 1000);
  REQUIRE(t.first_zero);
  CHECK(std::fabs(t.first_zero->r - 9.922198432699348L) < 1e-7L);
  Trajectory w = shoot(3, R(2), R(3), 1, 1, 1000);
  REQUIRE(w.first_zero);
  CHECK(w.first_zero->which == Component::u);
  CHECK(std::fabs(w.first_zero->r - 3.5636244110454873L) < 1e-7L);
}

TEST_CASE("critical profile for n = 3, p = q = 5") {
  Trajectory t = shoot(3, R(5), R(5), 1, 1, 10);
  CHECK_FALSE(t.first_zero);
  CHECK(t.r_end() == 10);
  long double worst = 0;
  for (const auto& s : t.samples) {
    long double exact = 1 / std::sqrt(1 + s.r * s.r / 3);
    worst = std::max(worst, std::fabs(s.u - exact) / exact);
  }
  for (int k = 0; k <= 1000; ++k) {
    long double r = k / 100.0L;
    long double exact = 1 / std::sqrt(1 + r * r / 3);
    worst = std::max(worst, std::fabs(t.at(r).u - exact) / exact);
  }
  CHECK(worst <= 1e-6L);
}

TEST_CASE("symmetric data stays symmetric") {
  Trajectory t = shoot(4, R(3), R(3), 1, 1, 50);
  for (const auto& s : t.samples) {
    CHECK(s.u == s.v);
    CHECK(s.du == s.dv);
  }
}

TEST_CASE("swapping (p, u0) with (q, v0) swaps the components exactly") {
  Trajectory a = shoot(5, R(3), R(2), 1, R(9, 10).to_long_double(), 100);
  Trajectory b = shoot(5, R(2), R(3), R(9, 10).to_long_double(), 1, 100);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].r == b.samples[i].r);
    CHECK(a.samples[i].u == b.samples[i].v);
    CHECK(a.samples[i].v == b.samples[i].u);
  }
  REQUIRE(a.first_zero);
  REQUIRE(b.first_zero);
  CHECK(a.first_zero->r == b.first_zero->r);
  CHECK(a.first_zero->which != b.first_zero->which);
}

TEST_CASE("subcritical sample: every shot has a finite first zero") {
  for (const auto& s : kSubcritical) {
    INFO(s.n << " " << s.p << " " << s.q);
    REQUIRE(classify(s.n, s.p, s.q).kind == Criticality::subcritical);
    Trajectory t = shoot(s.n, s.p, s.q, 1, 1, 1000);
    REQUIRE(t.first_zero);
    CHECK(t.first_zero->r < 1000);
  }
}

TEST_CASE("integrated form of the radial equation") {
  for (const auto& s : {kSubcritical[0], kSubcritical[4], kSubcritical[9]}) {
    Trajectory t = shoot(s.n, s.p, s.q, 1, 1, 1000);
    CHECK(flux_residual(t) <= 1e3L * t.rel_tol);
    Trajectory tight = shoot(s.n, s.p, s.q, 1, 1, 1000, 1e-10L, 1e-14L);
    CHECK(flux_residual(tight) <= 10 * tight.rel_tol);
  }
}

TEST_CASE("halving the tolerance moves the first zero within its error estimate") {
  for (const auto& s : {kSubcritical[2], kSubcritical[4], kSubcritical[7]}) {
    Trajectory a = shoot(s.n, s.p, s.q, 1, 1, 1000, 1e-9L, 1e-12L);
    Trajectory b = shoot(s.n, s.p, s.q, 1, 1, 1000, 5e-10L, 1e-12L);
    REQUIRE(a.first_zero);
    REQUIRE(b.first_zero);
    CHECK(std::fabs(a.first_zero->r - b.first_zero->r) <= a.first_zero->err);
  }
}

TEST_CASE("rescaling") {
  Trajectory t = shoot(5, R(2), R(2), 1, 1, 1000);
  RescaleReport id = rescale_check(t, R(1));
  CHECK(id.max_dev_u == 0);
  CHECK(id.zero_dev == 0);
  auto [a, b] = scaling_exponents(R(2), R(2));
  CHECK(a == 2);
  CHECK(b == 2);
  for (const auto& f : {R(1, 2), R(2), R(8)}) {
    RescaleReport r = rescale_check(t, f);
    INFO(f << " " << (double)r.max_dev_u << " " << (double)r.zero_dev);
    CHECK(r.compared > 10);
    CHECK(r.max_dev_u <= 10 * t.rel_tol);
    CHECK(r.max_dev_v <= 10 * t.rel_tol);
    REQUIRE(r.zero_rescaled);
    CHECK(r.zero_dev <= 10 * t.rel_tol);
    CHECK(r.ok());
  }
  // unequal exponents
  Trajectory u = shoot(4, R(3), R(2), 1, 1, 1000);
  for (const auto& f : {R(1, 2), R(2), R(8)}) CHECK(rescale_check(u, f).ok());
  CHECK_THROWS_AS(scaling_exponents(R(1, 2), R(2)), DomainError);
}

TEST_CASE("comparison along trajectories") {
  Trajectory sym = shoot(5, R(2), R(2), 1, 1, 1000);
  ComparisonReport s = check_comparison(sym);
  CHECK(s.initial_ok);
  CHECK(std::fabs(s.max_excess) <= s.tolerance);

  // v0^4/4 = 0.164 < u0^3/3; scipy gives max excess -0.1160516, attained at the zero of v
  Trajectory t = shoot(5, R(3), R(2), 1, 0.9L, 1000);
  ComparisonReport c = check_comparison(t);
  CHECK(c.initial_ok);
  CHECK_FALSE(c.flagged);
  CHECK(std::fabs(c.max_excess - (-0.11605159419940471L)) < 1e-6L);

  Trajectory bad = shoot(5, R(3), R(2), R(1, 2).to_long_double(), 1, 1000);
  ComparisonReport cb = check_comparison(bad);
  CHECK_FALSE(cb.initial_ok);
  CHECK(cb.flagged);

  CHECK_THROWS_AS(check_comparison(shoot(5, R(2), R(3), 1, 1, 10)), DomainError);
}

TEST_CASE("emitters") {
  Trajectory t = shoot(5, R(2), R(2), 1, 1, 1000);
  std::string csv = to_csv(t);
  CHECK(csv.rfind("r,u,du,v,dv\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(t.samples.size()) + 1);
  std::string svg = to_svg(t);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(to_json(t).find("\"first_zero\"") != std::string::npos);
}
