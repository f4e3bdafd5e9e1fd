/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#include "lec/asymptotic.hpp"

#include <algorithm>

#include <json.hpp>

#include "lec/bernstein.hpp"
#include "lec/errors.hpp"

namespace lec {

using nlohmann::json;

namespace {

PolyExpr n_() { return PolyExpr::var(Var::n); }
PolyExpr d1_() { return PolyExpr::var(Var::d1); }
PolyExpr d2_() { return PolyExpr::var(Var::d2); }
PolyExpr t_() { return PolyExpr::var(Var::x); }

PolyExpr coeff_of(const std::vector<std::pair<unsigned, PolyExpr>>& parts, unsigned i) {
  for (const auto& [e, c] : parts)
    if (e == i) return c;
  return PolyExpr();
}

PolyExpr exact_quotient(const PolyExpr& a, const PolyExpr& b, const char* what) {
  auto q = a.divide_exact(b);
  if (!q) throw ConsistencyError(std::string("expansion: ") + what + " is not an exact quotient");
  return *q;
}

json poly_json(const PolyExpr& p) { return json::parse(p.to_json()); }

json cert_summary(const BoundResult& b) {
  std::uint64_t boxes = 0;
  for (const auto& r : b.cert.check_results) boxes += r.stats.boxes;
  return {{"name", b.name}, {"claim", b.claim}, {"verdict", verdict_name(b.cert.verdict)},
          {"boxes", boxes}, {"input_hash", b.cert.input_hash}};
}

}  // namespace

const char* variant_name(Variant v) { return v == Variant::case2 ? "case2" : "c04"; }

Variant variant_from_name(const std::string& s) {
  if (s == "case2") return Variant::case2;
  if (s == "c04" || s == "c0=4") return Variant::c04;
  throw DomainError("unknown variant " + s);
}

PolyExpr Decomposition::den() const {
  PolyExpr d(den_scale);
  for (const auto& [f, e] : den_factors) d *= f.pow(e);
  return d;
}

PolyExpr Decomposition::coefficient(unsigned i) const { return coeff_of(residual, i); }

unsigned Decomposition::residual_degree() const { return residual.empty() ? 0 : residual.front().first; }

RatFunc Decomposition::reassemble() const {
  RatFunc base(n_() - PolyExpr(shift));
  return RatFunc(lead) / base.pow(2) + RatFunc(mid) / base.pow(3) +
         RatFunc(assemble(Var::n, residual)) / RatFunc(den());
}

std::string Decomposition::to_json() const {
  json res = json::array();
  for (std::size_t k = 0; k < residual.size(); ++k)
    res.push_back({{"i", residual[k].first}, {"content", contents[k].str()}, {"poly", poly_json(residual[k].second)},
                   {"text", residual[k].second.str()}});
  json den = json::array();
  for (const auto& [f, e] : den_factors) den.push_back({{"factor", f.str()}, {"power", e}});
  return json{{"variant", variant_name(variant)},
              {"shift", shift.str()},
              {"lead", lead.str()},
              {"mid", mid.str()},
              {"A3", A3.str()},
              {"A4", A4.str()},
              {"den_scale", den_scale.str()},
              {"den_factors", den},
              {"residual_degree", residual_degree()},
              {"residual", res}}
      .dump(1);
}

RatFunc product_margin_symbolic() {
  RatFunc N = RatFunc::var(Var::n);
  auto c = scheme1_symbolic();
  auto f1 = scheme1_closed(N, c.r, c.p, c.mu_r);
  auto f2 = scheme1_closed(N, c.s, c.q, c.mu_s);
  RatFunc F = f1.A * f2.A - c.p * c.q;
  if (!(F - (c.A1 * c.A2 - c.p * c.q)).is_zero()) throw ConsistencyError("closed and defining A1*A2 - p*q differ");
  return F;
}

Decomposition derive_decomposition(Variant v) {
  RatFunc F = product_margin_symbolic();
  Decomposition dec;
  dec.variant = v;
  dec.shift = v == Variant::case2 ? Rational(0) : Rational(1);
  PolyExpr num = F.num(), den = F.den();

  // Series in u = 1/(n - shift): write n = m + shift and read off the top
  // coefficients in m.
  PolyExpr m_plus = n_() + PolyExpr(dec.shift);
  auto nc = num.substitute(Var::n, m_plus).collect_n();
  auto dc = den.substitute(Var::n, m_plus).collect_n();
  unsigned dn = nc.front().first, dd = dc.front().first;
  if (dd != dn + 2) throw ConsistencyError("expansion: margin is not of order (n - s)^-2");
  PolyExpr D0 = coeff_of(dc, dd);
  if (!D0.is_constant()) throw ConsistencyError("expansion: leading denominator coefficient depends on d");
  Rational inv = Rational(1) / D0.constant_value();
  PolyExpr a0 = coeff_of(nc, dn);
  a0.scale(inv);
  PolyExpr a1 = coeff_of(nc, dn - 1) - a0 * coeff_of(dc, dd - 1);
  a1.scale(inv);
  dec.lead = a0;
  dec.mid = a1;

  // Common denominator of the displays.
  std::vector<PolyExpr> quartics;
  for (const auto& [f, e] : F.factors())
    if (e < 0 && f.degree(Var::n) == 4) quartics.push_back(f);
  if (quartics.size() != 2) throw ConsistencyError("expansion: expected two quartic denominator factors");
  Bindings<Rational> at;
  at[static_cast<std::size_t>(Var::d1)] = Rational(1);
  at[static_cast<std::size_t>(Var::d2)] = Rational(0);
  bool first_is_A3 = coeff_of(quartics[0].collect_n(), 0).eval(at).sign() != 0;
  dec.A3 = first_is_A3 ? quartics[0] : quartics[1];
  dec.A4 = first_is_A3 ? quartics[1] : quartics[0];
  dec.den_scale = 2;
  dec.den_factors = {{n_() - PolyExpr(1), 4},       {n_() - PolyExpr(2) * d1_(), 2}, {n_() + PolyExpr(2) * d1_(), 1},
                     {n_() - PolyExpr(2) * d2_(), 2}, {n_() + PolyExpr(2) * d2_(), 1}, {dec.A3, 1},
                     {dec.A4, 1}};
  if (v == Variant::case2) dec.den_factors.insert(dec.den_factors.begin() + 1, {n_(), 3});
  PolyExpr D = dec.den();
  PolyExpr base = n_() - PolyExpr(dec.shift);
  PolyExpr res = num * exact_quotient(D, den, "den / margin den") - a0 * exact_quotient(D, base.pow(2), "den / base^2") -
                 a1 * exact_quotient(D, base.pow(3), "den / base^3");
  dec.residual = res.collect_n();
  for (const auto& [i, c] : dec.residual) dec.contents.push_back(c.content());

  unsigned cap = v == Variant::case2 ? 17 : 14;
  if (dec.residual_degree() > cap)
    throw ConsistencyError("expansion: residual degree " + std::to_string(dec.residual_degree()) + " exceeds " +
                           std::to_string(cap));
  if (!(dec.reassemble() - F).is_zero()) throw ConsistencyError("expansion: reassembly identity failed");
  return dec;
}

PolyExpr printed_P() {
  return PolyExpr::parse(
      "(19*d1^3 - d1^2*(92 + 125*d2))/2 + d1*(92 + 232*d2 - 127*d2^2)/2 + d2*(20 - 12*d2 - 23*d2^2)/2");
}

PolyExpr printed_T() {
  return PolyExpr::parse(
      "d1^2*(19*d1 - 76 - 125*d2)/2 + d1*(60 + 296*d2 - 127*d2^2)/2 + d2*(-76 + 36*d2 - 23*d2^2)/2");
}

PolyExpr printed_A3() {
  return PolyExpr::parse(
      "4*n^4 + 4*(2 - 3*d1 - d2)*n^3 + (-44*d1 + 7*d1^2 + 12*d2 + 10*d1*d2 - d2^2)*n^2"
      " + (-4*d1 + 54*d1^2 + 4*d2 - 20*d1*d2 - 2*d2^2)*n + 8*d1*(d1 - d2)");
}

PolyExpr printed_A4() {
  return PolyExpr::parse(
      "4*n^4 + 4*(2 - 3*d1 - d2)*n^3 + (36*d1 - 9*d1^2 - 68*d2 + 42*d1*d2 - 17*d2^2)*n^2"
      " + (12*d1 - 18*d1^2 - 12*d2 - 36*d1*d2 + 86*d2^2)*n + 24*d2*(d2 - d1)");
}

Region wide_triangle(const Rational& tau) { return triangle_region(Rational(2), tau); }

Region enlarged_box(const Rational& tau) {
  return box_region({Var::d1, Var::d2}, {Interval(Rational::of(1, 2), Rational(2)), Interval(0, 1)}, tau);
}

const std::vector<std::pair<unsigned, Rational>>& residual_bound_constants() {
  static const std::vector<std::pair<unsigned, Rational>> c = {
      {14, 31},     {13, 40},     {12, 803},    {11, 1982},   {10, 200},     {9, 60000},  {8, 150000}, {7, 1600},
      {6, 800000},  {5, 900000},  {4, 80000},   {3, 3000000}, {2, 130000},   {1, 40},     {0, 3}};
  return c;
}

BoundResult verify_Ri_bound(const Decomposition& dec, unsigned i, const Rational& c, const EngineOptions& opts) {
  if (dec.variant != Variant::c04) throw DomainError("residual bounds are stated for the c04 expansion");
  PolyExpr f = dec.coefficient(i);
  f.scale(Rational::of(1, 32));
  PolyExpr g = PolyExpr(4) * d1_() + PolyExpr(12) * d2_();
  g.scale(-c);
  bool wide = i >= 10;
  BoundResult r;
  r.name = "R" + std::to_string(i);
  r.claim = "R" + std::to_string(i) + "/32 >= -" + c.str() + "*(4*d1 + 12*d2) on " +
            (wide ? "0 <= d2 < d1 < 2 - d2" : "0 <= d2 <= 1, 1/2 <= d1 <= 2");
  r.cert = certify_poly_bound(f, g, wide ? wide_triangle() : enlarged_box(), opts);
  return r;
}

std::vector<BoundResult> verify_Ri_bounds(const Decomposition& dec, const EngineOptions& opts) {
  std::vector<BoundResult> out;
  for (const auto& [i, c] : residual_bound_constants()) out.push_back(verify_Ri_bound(dec, i, c, opts));
  return out;
}

BoundResult verify_mid_bound(const Decomposition& dec, const EngineOptions& opts) {
  const char* nm = dec.variant == Variant::case2 ? "P" : "T";
  BoundResult r;
  r.name = nm;
  r.claim = std::string(nm) + " + 8*(d1 + 3*d2) >= 0 on 0 <= d2 < d1 < 2 - d2";
  r.cert = certify_poly_bound(dec.mid, PolyExpr(-8) * (d1_() + PolyExpr(3) * d2_()), wide_triangle(), opts);
  return r;
}

PolyExpr A3_lower() { return PolyExpr::parse("4*n^4 - 16*n^3 - 60*n^2 - n"); }
PolyExpr A4_lower() { return PolyExpr::parse("4*n^4 - 16*n^3 - 16*n^2 - 50*n - 12"); }

PolyExpr compactify(const PolyExpr& f, unsigned degree_n) {
  std::vector<std::pair<unsigned, PolyExpr>> parts;
  for (const auto& [e, c] : f.collect_n()) {
    if (e > degree_n) throw DomainError("compactify: degree in n exceeds the multiplier");
    parts.push_back({degree_n - e, c});
  }
  std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  return assemble(Var::x, parts);
}

namespace {

/// The wide triangle lifted to (d1, d2, t) with t in [0, t_hi].
Region lifted_triangle(const Rational& t_hi, const Rational& tau) {
  Region base = wide_triangle(tau);
  Region r;
  r.vars = {Var::d1, Var::d2, Var::x};
  r.box = {base.box[0], base.box[1], Interval(Rational(0), t_hi)};
  for (auto lc : base.constraints) {
    lc.a.push_back(Rational(0));
    r.constraints.push_back(lc);
  }
  r.tau = tau;
  r.validate();
  return r;
}

}  // namespace

QuarticBoundReport verify_quartic_bound(const std::string& name, const PolyExpr& A, const PolyExpr& lower, long n_lo,
                                        long n_hi, const EngineOptions& opts) {
  if (n_lo < 1 || n_hi < n_lo) throw DomainError("quartic bound: bad n range");
  QuarticBoundReport rep;
  PolyExpr diff = A - lower;
  for (long n = n_lo; n <= n_hi; ++n) {
    PolyExpr an = A.substitute(Var::n, PolyExpr(Rational(n)));
    PolyExpr ln = lower.substitute(Var::n, PolyExpr(Rational(n)));
    BoundResult b;
    b.name = name + "@n=" + std::to_string(n);
    b.claim = name + " >= " + lower.str() + " at n = " + std::to_string(n);
    b.cert = certify_poly_bound(an, ln, wide_triangle(), opts);
    if (b.cert.verdict != Verdict::certified) rep.failures.push_back(b.name + ": " + verdict_name(b.cert.verdict));
    rep.per_n.push_back(std::move(b));
  }
  if (!rep.failures.empty()) {
    rep.failures.push_back(name + "@n>=" + std::to_string(n_hi) + ": skipped");
    return rep;
  }
  // n >= n_hi: t = 1/n in [0, 1/n_hi], multiply through by t^deg.
  unsigned deg = diff.degree(Var::n);
  BoundResult b;
  b.name = name + "@n>=" + std::to_string(n_hi);
  b.claim = "t^" + std::to_string(deg) + "*(" + name + " - lower)(n = 1/t) >= 0 for t in [0, 1/" +
            std::to_string(n_hi) + "]";
  // Three axes share the subdivision depth; boxes reach the tau strip in
  // about ten halvings per axis.
  EngineOptions deep = opts;
  deep.depth_cap = std::max(deep.depth_cap, 48);
  b.cert = certify_poly_bound(compactify(diff, deg), PolyExpr(), lifted_triangle(Rational::of(1, n_hi), wide_triangle().tau),
                              deep);
  if (b.cert.verdict != Verdict::certified) rep.failures.push_back(b.name + ": " + verdict_name(b.cert.verdict));
  rep.tail.push_back(std::move(b));
  rep.certified = rep.failures.empty();
  return rep;
}

QuarticBoundReport verify_A3A4_bounds(long n_lo, long n_hi, const EngineOptions& opts) {
  QuarticBoundReport a = verify_quartic_bound("A3", printed_A3(), A3_lower(), n_lo, n_hi, opts);
  QuarticBoundReport b = verify_quartic_bound("A4", printed_A4(), A4_lower(), n_lo, n_hi, opts);
  for (auto& x : b.per_n) a.per_n.push_back(std::move(x));
  for (auto& x : b.tail) a.tail.push_back(std::move(x));
  for (auto& x : b.failures) a.failures.push_back(std::move(x));
  a.certified = a.failures.empty();
  return a;
}

// ---------------------------------------------------------------- tail

namespace {

PolyExpr tail_sum() { return PolyExpr::parse("31*n^14 + 40*n^13 + 803*n^12 + 1982*n^11 + 200*n^10 + 40000000*n^9"); }

/// Factors of the cleared denominator, and the cleared numerator.
std::vector<std::pair<std::string, PolyExpr>> tail_denominators() {
  PolyExpr n = n_();
  return {{"n", n},
          {"(n-4)^2", (n - PolyExpr(4)).pow(2)},
          {"(n-2)^2", (n - PolyExpr(2)).pow(2)},
          {"n^2", n.pow(2)},
          {"4n^4-16n^3-60n^2-n", A3_lower()},
          {"4n^4-16n^3-16n^2-50n-12", A4_lower()}};
}

PolyExpr tail_cleared() {
  PolyExpr n = n_();
  PolyExpr rest = (n - PolyExpr(4)).pow(2) * (n - PolyExpr(2)).pow(2) * n.pow(2) * A3_lower() * A4_lower();
  return (PolyExpr(4) * (n - PolyExpr(1)).pow(2) - PolyExpr(2) * n * (n - PolyExpr(1))) * rest -
         PolyExpr(16) * n * tail_sum();
}

Rational eval_at(const PolyExpr& p, Var v, const Rational& x) {
  Bindings<Rational> b;
  b[static_cast<std::size_t>(v)] = x;
  return p.eval(b);
}

/// All coefficients >= 0 and the constant term > 0.
bool shifted_positive(const PolyExpr& p_t) {
  auto parts = p_t.collect(Var::x);
  bool has_const = false;
  for (const auto& [e, c] : parts) {
    Rational v = c.constant_value();
    if (v.sign() < 0) return false;
    if (e == 0) has_const = v.sign() > 0;
  }
  return has_const;
}

}  // namespace

Rational tail_display(long n) {
  Rational N(n);
  Rational den = (N - 4) * (N - 4) * (N - 2) * (N - 2) * N * N * eval_at(A3_lower(), Var::n, N) *
                 eval_at(A4_lower(), Var::n, N);
  if (den.is_zero()) throw DegeneratePointError("tail denominator", "vanishes at n = " + std::to_string(n));
  return Rational(4) * (N - 1) * (N - 1) / N - Rational(2) * (N - 1) - Rational(16) * eval_at(tail_sum(), Var::n, N) / den;
}

TailReport verify_tail(long n_min, const EngineOptions& opts) {
  if (n_min < 5) throw DomainError("tail: n_min must be at least 5");
  TailReport rep;
  rep.n_min = n_min;
  PolyExpr shift = PolyExpr(Rational(n_min)) + t_();
  bool denominators_ok = true;
  for (const auto& [name, f] : tail_denominators()) {
    bool ok = shifted_positive(f.substitute(Var::n, shift));
    rep.denominators.push_back({name, ok});
    denominators_ok = denominators_ok && ok;
  }
  rep.cleared = tail_cleared();
  rep.shifted = rep.cleared.substitute(Var::n, shift);
  if (!denominators_ok) {
    rep.route = "none (denominator sign not certified)";
    return rep;
  }
  // Cross-check the cleared form against the display itself.
  Rational M = 1;
  for (const auto& [name, f] : tail_denominators()) M *= eval_at(f, Var::n, Rational(n_min));
  if (eval_at(rep.cleared, Var::n, Rational(n_min)) / M != tail_display(n_min))
    throw ConsistencyError("tail: cleared polynomial disagrees with the display");

  if (shifted_positive(rep.shifted)) {
    rep.route = "shifted-coefficients";
    rep.verdict = Verdict::certified;
    return rep;
  }
  if (eval_at(rep.shifted, Var::x, Rational(0)).sign() <= 0) {
    rep.route = "point evaluation";
    rep.verdict = Verdict::refuted;
    rep.refuting_n = n_min;
    return rep;
  }
  rep.route = "interval+cauchy";
  auto parts = rep.shifted.collect(Var::x);
  Rational lead = parts.front().second.constant_value();
  if (lead.sign() <= 0) {
    rep.verdict = Verdict::refuted;
    return rep;
  }
  Rational mx = 0;
  for (const auto& [e, c] : parts) mx = max(mx, (c.constant_value() / lead).abs());
  rep.cauchy_bound = Rational(1) + mx;
  Region r = box_region({Var::x}, {Interval(Rational(0), *rep.cauchy_bound)}, Rational::pow2(-10));
  rep.interval_cert = certify_positive(RatFunc(rep.shifted), r, opts);
  rep.verdict = rep.interval_cert->verdict;
  if (rep.verdict == Verdict::refuted) {
    Integer hi = rep.cauchy_bound->ceil();
    for (long t = 0; Integer(t) <= hi; ++t)
      if (eval_at(rep.shifted, Var::x, Rational(t)).sign() <= 0) {
        rep.refuting_n = n_min + t;
        break;
      }
  }
  return rep;
}

std::string TailReport::to_json() const {
  json dens = json::array();
  for (const auto& [f, ok] : denominators) dens.push_back({{"factor", f}, {"positive", ok}});
  json coeffs = json::array();
  for (const auto& [e, c] : shifted.collect(Var::x)) coeffs.push_back({{"power", e}, {"coeff", c.str()}});
  json j = {{"kind", "tail"},
            {"n_min", n_min},
            {"verdict", verdict_name(verdict)},
            {"route", route},
            {"cleared", cleared.str()},
            {"shifted_coefficients", coeffs},
            {"denominators", dens},
            {"display_at_n_min", n_min >= 5 ? tail_display(n_min).str() : ""}};
  if (cauchy_bound) j["cauchy_bound"] = cauchy_bound->str();
  if (interval_cert) j["interval_certificate"] = json::parse(interval_cert->to_json());
  if (refuting_n) j["refuting_n"] = *refuting_n;
  return j.dump(1);
}

// ---------------------------------------------------------------- c0

C0Report verify_c0_asymptotic(const Rational& c0, const EngineOptions& opts) {
  if (c0 <= 2) throw DomainError("c0 must exceed 2");
  C0Report rep;
  rep.c0 = c0;
  Decomposition dec = derive_decomposition(Variant::case2);
  Region tri = wide_triangle();

  // sum Q_i n^i >= sum lo_i n^i >= -C0* n^17 for n >= 13.
  Rational c0_sum = 0;
  for (const auto& [i, q] : dec.residual) {
    Rational lo = Rational(BernsteinPatch::build(q, tri.vars, tri.box).min_coefficient().floor());
    BoundResult b;
    b.name = "Q" + std::to_string(i);
    b.claim = "Q" + std::to_string(i) + " >= " + lo.str() + " on 0 <= d2 < d1 < 2 - d2";
    b.cert = certify_poly_bound(q, PolyExpr(lo), tri, opts);
    rep.certs.push_back(std::move(b));
    rep.q_lower.push_back({i, lo});
    if (lo.sign() < 0) {
      Rational w = 1;
      for (unsigned k = i; k < 17; ++k) w /= 13;
      c0_sum += -lo * w;
    }
  }
  rep.C0_star = Rational(c0_sum.ceil());

  rep.certs.push_back(verify_mid_bound(dec, opts));

  // 2(n-1)^4 (n-2d1)^2 (n+2d1) (n-2d2)^2 (n+2d2) A3 A4 >= 20 n^18 for n >= n1*.
  // Divided by n^18 each factor is increasing in n and bounded below on the
  // triangle (d1 < 2, d2 < 1) by its value at n1; A3, A4 go through their
  // certified quartic lower bounds.
  QuarticBoundReport quartic = verify_A3A4_bounds(2, 200, opts);
  for (auto& b : quartic.per_n)
    if (b.cert.verdict != Verdict::certified) rep.certs.push_back(b);
  for (auto& b : quartic.tail) rep.certs.push_back(b);
  auto factor_floor = [](long n1) {
    Rational N(n1), u = Rational(1) / N;
    Rational one_m = Rational(1) - u;
    Rational a = Rational(1) - Rational(4) * u, b = Rational(1) - Rational(2) * u;
    Rational q3 = eval_at(A3_lower(), Var::n, N) * u * u * u * u;
    Rational q4 = eval_at(A4_lower(), Var::n, N) * u * u * u * u;
    if (q3.sign() <= 0 || q4.sign() <= 0) return Rational(0);
    return Rational(2) * one_m * one_m * one_m * one_m * a * a * b * b * q3 * q4;
  };
  for (long n1 = 13; n1 <= 1 << 20; ++n1)
    if (factor_floor(n1) >= 20) {
      rep.n1_star = n1;
      break;
    }
  if (rep.n1_star == 0 || !quartic.certified) return rep;

  // 2(c0-2)/n^3 - C0*/(20 n^4) > 0  iff  n > C0*/(40(c0-2)).
  Rational thr = rep.C0_star / (Rational(40) * (c0 - 2));
  long need = static_cast<long>(thr.floor().get_si()) + 1;
  rep.N_star = std::max(rep.n1_star, need);
  rep.certified = true;
  for (const auto& b : rep.certs) rep.certified = rep.certified && b.cert.verdict == Verdict::certified;
  return rep;
}

std::string C0Report::to_json() const {
  json q = json::array();
  for (const auto& [i, lo] : q_lower) q.push_back({{"i", i}, {"lower", lo.str()}});
  json cs = json::array();
  for (const auto& b : certs) cs.push_back(cert_summary(b));
  return json{{"kind", "c0"},        {"c0", c0.str()},   {"C0_star", C0_star.str()}, {"n1_star", n1_star},
              {"N_star", N_star},    {"certified", certified}, {"q_lower", q},         {"certificates", cs}}
      .dump(1);
}

}  // namespace lec
