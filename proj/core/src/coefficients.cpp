/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#include "lec/coefficients.hpp"

#include <json.hpp>

namespace lec {

namespace {

void check_point(long n, const Rational& d1, const Rational& d2) {
  if (n < 3) throw DomainError("dimension n must be at least 3");
  if (d2.sign() < 0) throw DomainError("d2 must be nonnegative");
  if (d1 < d2) throw DomainError("d1 must be at least d2");
  if (d1 * 2 >= Rational(n)) throw DomainError("d1 must be below n/2");
}

nlohmann::json interval_json(const Interval& v) {
  return {{"lo", v.lo().str()}, {"hi", v.hi().str()}, {"mid", v.mid().to_double()}};
}

}  // namespace

const char* scheme_name(Scheme s) { return s == Scheme::I ? "I" : "II"; }

ExponentData exponents_from_d(long n, const Rational& d1, const Rational& d2) {
  if (n < 3) throw DomainError("dimension n must be at least 3");
  const Rational half(Rational::of(n, 2));
  if (d1.abs() >= half || d2.abs() >= half) throw DomainError("|d| must be below n/2");
  ExponentData e;
  e.n = n;
  e.d1 = d1;
  e.d2 = d2;
  auto sh = shifts<Rational>(Rational(n), d1, d2);
  e.p = sh.p;
  e.q = sh.q;
  Rational pq = e.p * e.q;
  if (pq != Rational(1)) {
    e.alpha = Rational(2) * (e.p + 1) / (pq - 1);
    e.beta = Rational(2) * (e.q + 1) / (pq - 1);
  }
  e.sobolev_gap = Rational(1) / (e.p + 1) + Rational(1) / (e.q + 1) - (Rational(1) - Rational::of(2, n));
  return e;
}

std::string to_json(const ExponentData& e) {
  nlohmann::json j = {{"schema", "lec/1"}, {"n", e.n},         {"d1", e.d1.str()}, {"d2", e.d2.str()},
                      {"p", e.p.str()},    {"q", e.q.str()},   {"sobolev_gap", e.sobolev_gap.str()}};
  j["alpha"] = e.alpha ? nlohmann::json(e.alpha->str()) : nlohmann::json(nullptr);
  j["beta"] = e.beta ? nlohmann::json(e.beta->str()) : nlohmann::json(nullptr);
  return j.dump(2);
}

Rational scaling_exponent(long n, const Rational& d1, const Rational& d2) {
  Rational sum = d1 + d2;
  if (sum.is_zero()) throw DomainError("scaling exponent needs d1 + d2 != 0");
  return (-(d1 + 3 * d2) - (2 - d1 - d2) * Rational(n)) / sum;
}

Coefficients<Rational> scheme1(long n, const Rational& d1, const Rational& d2) {
  check_point(n, d1, d2);
  Coefficients<Rational> c = scheme1_generic<Rational>(Rational(n), d1, d2);
  if (c.q == Rational(1) && (c.s.is_zero() || c.s == Rational(-1)))
    throw DomainError("q = 1 requires s not in {0, -1}");
  if (c.p == Rational(1) && (c.r.is_zero() || c.r == Rational(-1)))
    throw DomainError("p = 1 requires r not in {0, -1}");
  return c;
}

Coefficients<RatFunc> scheme1_symbolic() {
  return scheme1_generic<RatFunc>(RatFunc::var(Var::n), RatFunc::var(Var::d1), RatFunc::var(Var::d2));
}

Coefficients<Interval> scheme2(long n, const Rational& d1, const Rational& d2, const Rational& eps0,
                               const Rational& width) {
  check_point(n, d1, d2);
  if (eps0.sign() < 0) throw DomainError("eps0 must be nonnegative");
  if (width.sign() <= 0) throw DomainError("width must be positive");
  auto sh = shifts<Rational>(Rational(n), d1, d2);
  if (surd_argument<Rational>(Rational(n), sh.r).sign() < 0 || surd_argument<Rational>(Rational(n), sh.s).sign() < 0)
    throw DomainError("negative surd argument");
  return scheme2_generic<Interval>(Interval(n), Interval(d1), Interval(d2), eps0, width);
}

bool side_conditions_hold(const Coefficients<Rational>& c) {
  auto one = [](const Rational& p, const Rational& r, const Rational& L, const Rational& delta) {
    if (p == Rational(1)) return !r.is_zero() && r != Rational(-1);
    return ((p - 1) * L * delta).sign() > 0;
  };
  return one(c.p, c.r, c.L1, c.delta1) && one(c.q, c.s, c.L2, c.delta2);
}

bool side_conditions_proven(const Coefficients<Interval>& c) {
  auto one = [](const Interval& p, const Interval& r, const Interval& L, const Interval& delta) {
    if (p == Interval(1)) return !r.contains(Rational(0)) && !r.contains(Rational(-1));
    return ((p - Interval(1)) * L * delta).positive();
  };
  return one(c.p, c.r, c.L1, c.delta1) && one(c.q, c.s, c.L2, c.delta2);
}

std::string to_json(const Coefficients<Rational>& c, long n, const Rational& d1, const Rational& d2) {
  nlohmann::json j = {{"schema", "lec/1"}, {"scheme", scheme_name(c.scheme)}};
  j["inputs"] = {{"n", n}, {"d1", d1.str()}, {"d2", d2.str()}};
  nlohmann::json f = nlohmann::json::object();
  c.for_each([&](const char* name, const Rational& v) { f[name] = {{"exact", v.str()}, {"approx", v.to_double()}}; });
  j["fields"] = f;
  j["side_conditions"] = side_conditions_hold(c);
  return j.dump(2);
}

std::string to_json(const Coefficients<Interval>& c, long n, const Rational& d1, const Rational& d2) {
  nlohmann::json j = {{"schema", "lec/1"}, {"scheme", scheme_name(c.scheme)}};
  j["inputs"] = {{"n", n}, {"d1", d1.str()}, {"d2", d2.str()}, {"eps0", c.eps0 ? c.eps0->str() : "0"}};
  nlohmann::json f = nlohmann::json::object();
  c.for_each([&](const char* name, const Interval& v) { f[name] = interval_json(v.round_out(96)); });
  Interval F = c.beta1 * c.beta2 - c.gamma1 * c.gamma2;
  f["beta1beta2_minus_gamma1gamma2"] = interval_json(F.round_out(96));
  j["fields"] = f;
  j["side_conditions_proven"] = side_conditions_proven(c);
  return j.dump(2);
}

}  // namespace lec
