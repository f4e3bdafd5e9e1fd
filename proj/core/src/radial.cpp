// SPDX-License-Identifier: Apache-2.0

#include "lec/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace lec::radial {

namespace {

using State = std::array<real, 4>;  // u, u', v, v'

// odd extension keeps stage evaluations defined just past a zero
real spow(real x, real e) { return x >= 0 ? std::pow(x, e) : -std::pow(-x, e); }

struct System {
  real nm1, p, q;
  State f(real r, const State& y) const {
    return {y[1], -spow(y[2], p) - nm1 / r * y[1], y[3], -spow(y[0], q) - nm1 / r * y[3]};
  }
};

// Dormand-Prince 5(4)
constexpr real c2 = 1.0L / 5, c3 = 3.0L / 10, c4 = 4.0L / 5, c5 = 8.0L / 9;
constexpr real a21 = 1.0L / 5;
constexpr real a31 = 3.0L / 40, a32 = 9.0L / 40;
constexpr real a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
constexpr real a51 = 19372.0L / 6561, a52 = -25360.0L / 2187, a53 = 64448.0L / 6561, a54 = -212.0L / 729;
constexpr real a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247, a64 = 49.0L / 176,
               a65 = -5103.0L / 18656;
constexpr real a71 = 35.0L / 384, a73 = 500.0L / 1113, a74 = 125.0L / 192, a75 = -2187.0L / 6784,
               a76 = 11.0L / 84;
constexpr real e1 = 71.0L / 57600, e3 = -71.0L / 16695, e4 = 71.0L / 1920, e5 = -17253.0L / 339200,
               e6 = 22.0L / 525, e7 = -1.0L / 40;
constexpr real d1 = -12715105075.0L / 11282082432, d3 = 87487479700.0L / 32700410799,
               d4 = -10690763975.0L / 1880347072, d5 = 701980252875.0L / 199316789632,
               d6 = -1453857185.0L / 822651844, d7 = 69997945.0L / 29380423;

struct StepResult {
  State y1, k7;
  real err = 0;
  Segment seg;
};

StepResult dp_step(const System& sys, real r, const State& y, const State& k1, real h, real rel, real abs) {
  State k2, k3, k4, k5, k6, k7, t;
  auto lin = [&](std::initializer_list<std::pair<real, const State*>> terms) {
    State out = y;
    for (const auto& [a, k] : terms)
      for (int i = 0; i < 4; ++i) out[i] += h * a * (*k)[i];
    return out;
  };
  k2 = sys.f(r + c2 * h, lin({{a21, &k1}}));
  k3 = sys.f(r + c3 * h, lin({{a31, &k1}, {a32, &k2}}));
  k4 = sys.f(r + c4 * h, lin({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  k5 = sys.f(r + c5 * h, lin({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  k6 = sys.f(r + h, lin({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
  t = lin({{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
  k7 = sys.f(r + h, t);

  StepResult s;
  s.y1 = t;
  s.k7 = k7;
  std::array<real, 4> sq{};
  for (int i = 0; i < 4; ++i) {
    real e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    real sc = abs + rel * std::max(std::fabs(y[i]), std::fabs(t[i]));
    sq[i] = (e / sc) * (e / sc);
  }
  // grouped so that swapping (u, u') with (v, v') gives the same rounding
  s.err = std::sqrt(((sq[0] + sq[1]) + (sq[2] + sq[3])) / 4);

  s.seg.r0 = r;
  s.seg.h = h;
  for (int i = 0; i < 4; ++i) {
    real ydiff = t[i] - y[i];
    real bspl = h * k1[i] - ydiff;
    s.seg.rcont[0][i] = y[i];
    s.seg.rcont[1][i] = ydiff;
    s.seg.rcont[2][i] = bspl;
    s.seg.rcont[3][i] = ydiff - h * k7[i] - bspl;
    s.seg.rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
  }
  return s;
}

Sample to_sample(real r, const State& y) { return {r, y[0], y[1], y[2], y[3]}; }

// smallest root of component c of the segment in (seg.r0, seg.r0 + h], by bisection
real locate_zero(const Segment& seg, int c, real tol) {
  real lo = seg.r0, hi = seg.r0 + seg.h;
  while (hi - lo > tol) {
    real mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    if (seg.eval(mid)[c] > 0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

std::string fmt(real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Lg", x);
  return buf;
}

real rpow(const Rational& base, const Rational& e) {
  return std::pow(base.to_long_double(), e.to_long_double());
}

}  // namespace

const char* component_name(Component c) { return c == Component::u ? "u" : "v"; }

std::array<real, 4> Segment::eval(real r) const {
  real th = (r - r0) / h, th1 = 1 - th;
  std::array<real, 4> out;
  for (int i = 0; i < 4; ++i)
    out[i] = rcont[0][i] + th * (rcont[1][i] + th1 * (rcont[2][i] + th * (rcont[3][i] + th1 * rcont[4][i])));
  return out;
}

Sample Trajectory::at(real r) const {
  if (r < 0 || r > r_end()) throw DomainError("radius outside the trajectory");
  if (segments.empty() || r <= segments.front().r0) {
    real a = std::pow(v0, p.to_long_double()) / (2 * n), b = std::pow(u0, q.to_long_double()) / (2 * n);
    return {r, u0 - a * r * r, -2 * a * r, v0 - b * r * r, -2 * b * r};
  }
  auto it = std::upper_bound(segments.begin(), segments.end(), r,
                             [](real x, const Segment& s) { return x < s.r0; });
  const Segment& s = *std::prev(it);
  return to_sample(r, s.eval(std::min(r, s.r0 + s.h)));
}

Trajectory shoot(long n, const Rational& p, const Rational& q, real u0, real v0, real r_max, real rel_tol,
                 real abs_tol) {
  if (n < 1) throw DomainError("dimension must be positive");
  if (p.sign() <= 0 || q.sign() <= 0) throw DomainError("exponents must be positive");
  if (!(u0 > 0) || !(v0 > 0)) throw DomainError("initial values must be positive");
  if (!(r_max > 0)) throw DomainError("r_max must be positive");
  if (!(rel_tol > 0) || !(abs_tol > 0)) throw DomainError("tolerances must be positive");

  Trajectory t;
  t.n = n;
  t.p = p;
  t.q = q;
  t.u0 = u0;
  t.v0 = v0;
  t.r_max = r_max;
  t.rel_tol = rel_tol;
  t.abs_tol = abs_tol;
  const System sys{static_cast<real>(n - 1), p.to_long_double(), q.to_long_double()};

  // series start, r0 a millionth of the natural length
  real a = std::pow(v0, sys.p) / (2 * n), b = std::pow(u0, sys.q) / (2 * n);
  real scale = 1 / std::sqrt(std::max(a / u0, b / v0));
  real r = std::min(1e-6L * scale, r_max);
  State y{u0 - a * r * r, -2 * a * r, v0 - b * r * r, -2 * b * r};
  t.samples.push_back({0, u0, 0, v0, 0});
  t.samples.push_back(to_sample(r, y));
  if (r >= r_max) return t;

  State k1 = sys.f(r, y);
  real h = std::min(r_max - r, 1e-3L * scale);
  const std::size_t max_steps = 50'000'000;
  for (std::size_t steps = 0; r < r_max; ++steps) {
    if (steps > max_steps) throw StiffnessError("step budget exhausted", t.samples.back());
    if (h < 64 * std::numeric_limits<real>::epsilon() * r)
      throw StiffnessError("step size underflow at r = " + fmt(r), t.samples.back());
    bool last = false;
    if (r + h >= r_max) {
      h = r_max - r;
      last = true;
    }
    StepResult s = dp_step(sys, r, y, k1, h, rel_tol, abs_tol);
    if (!(s.err <= 1)) {
      ++t.rejected;
      real fac = std::isfinite(s.err) ? std::max(0.2L, 0.9L * std::pow(s.err, -0.2L)) : 0.2L;
      h *= fac;
      continue;
    }
    t.segments.push_back(s.seg);
    if (s.y1[0] <= 0 || s.y1[2] <= 0) {
      const Segment& seg = t.segments.back();
      real ru = s.y1[0] <= 0 ? locate_zero(seg, 0, abs_tol) : r + 2 * h;
      real rv = s.y1[2] <= 0 ? locate_zero(seg, 2, abs_tol) : r + 2 * h;
      FirstZero z;
      z.which = ru <= rv ? Component::u : Component::v;
      z.r = std::min(ru, rv);
      Sample at = to_sample(z.r, seg.eval(z.r));
      if (z.which == Component::u)
        at.u = 0;
      else
        at.v = 0;
      real slope = std::fabs(z.which == Component::u ? at.du : at.dv);
      real amp = std::max(u0, v0);
      // bracket width plus the accumulated tolerance carried through the slope
      z.err = abs_tol + static_cast<real>(t.segments.size()) * (rel_tol * amp + abs_tol) / std::max(slope, abs_tol);
      t.samples.push_back(at);
      t.first_zero = z;
      return t;
    }
    r = last ? r_max : r + h;
    y = s.y1;
    k1 = s.k7;
    t.samples.push_back(to_sample(r, y));
    real fac = s.err > 0 ? std::min(10.0L, std::max(0.2L, 0.9L * std::pow(s.err, -0.2L))) : 10.0L;
    h *= fac;
  }
  return t;
}

std::pair<Rational, Rational> scaling_exponents(const Rational& p, const Rational& q) {
  Rational d = p * q - Rational(1);
  if (d.sign() == 0) throw DomainError("scaling exponents need pq != 1");
  return {Rational(2) * (p + Rational(1)) / d, Rational(2) * (q + Rational(1)) / d};
}

ComparisonReport check_comparison(const Trajectory& t) {
  if (t.p < t.q) throw DomainError("comparison needs p >= q");
  if (t.p * t.q <= Rational(1)) throw DomainError("comparison needs pq > 1");
  real p1 = t.p.to_long_double() + 1, q1 = t.q.to_long_double() + 1;
  auto excess = [&](real u, real v) { return std::pow(v, p1) / p1 - std::pow(u, q1) / q1; };
  ComparisonReport rep;
  rep.initial_excess = excess(t.u0, t.v0);
  rep.initial_ok = rep.initial_excess <= 0;
  rep.max_excess = rep.initial_excess;
  real amp = std::max(std::pow(t.v0, p1) / p1, std::pow(t.u0, q1) / q1);
  rep.tolerance = 10 * t.rel_tol * amp + t.abs_tol;
  auto visit = [&](real r, real u, real v) {
    if (u < 0 || v < 0) return;
    real e = excess(u, v);
    if (e > rep.max_excess) {
      rep.max_excess = e;
      rep.at_r = r;
    }
  };
  for (const auto& s : t.samples) visit(s.r, s.u, s.v);
  // the maximum can sit inside a step
  for (const auto& seg : t.segments)
    for (int k = 1; k < 16; ++k) {
      real r = std::min(seg.r0 + seg.h * k / 16, t.r_end());
      auto y = seg.eval(r);
      visit(r, y[0], y[2]);
    }
  rep.flagged = rep.max_excess > rep.tolerance;
  return rep;
}

bool RescaleReport::ok(real factor) const {
  bool zeros = zero_original.has_value() == zero_rescaled.has_value();
  real tol = factor * tolerance;
  return zeros && max_dev_u <= tol && max_dev_v <= tol && (!zero_original || zero_dev <= tol);
}

RescaleReport rescale_check(const Trajectory& t, const Rational& R) {
  if (R.sign() <= 0) throw DomainError("R must be positive");
  auto [ea, eb] = scaling_exponents(t.p, t.q);
  RescaleReport rep;
  rep.R = R;
  rep.alpha = ea.to_long_double();
  rep.beta = eb.to_long_double();
  rep.tolerance = t.rel_tol;
  real Rf = R.to_long_double();
  real Ra = rpow(R, ea), Rb = rpow(R, eb);
  if (t.first_zero) rep.zero_original = t.first_zero->r;
  if (R == Rational(1)) {
    rep.zero_rescaled = rep.zero_original;
    return rep;
  }
  Trajectory f = shoot(t.n, t.p, t.q, Ra * t.u0, Rb * t.v0, t.r_max / Rf, t.rel_tol, t.abs_tol);
  if (f.first_zero) rep.zero_rescaled = f.first_zero->r;
  if (rep.zero_original && rep.zero_rescaled)
    rep.zero_dev = std::fabs(Rf * *rep.zero_rescaled - *rep.zero_original) / *rep.zero_original;

  // compare while both components stay above a hundredth of their start values;
  // near a zero the relative deviation measures only the zero's location
  real end = std::min(t.r_end() / Rf, f.r_end());
  for (const auto& s : f.samples) {
    if (s.r > end) break;
    if (s.u < 1e-2L * f.u0 || s.v < 1e-2L * f.v0) break;
    Sample o = t.at(std::min(Rf * s.r, t.r_end()));
    rep.max_dev_u = std::max(rep.max_dev_u, std::fabs(Ra * o.u - s.u) / s.u);
    rep.max_dev_v = std::max(rep.max_dev_v, std::fabs(Rb * o.v - s.v) / s.v);
    ++rep.compared;
  }
  return rep;
}

const char* criticality_name(Criticality c) {
  switch (c) {
    case Criticality::subcritical:
      return "subcritical";
    case Criticality::critical:
      return "critical";
    case Criticality::supercritical:
      return "supercritical";
  }
  return "?";
}

Classification classify(long n, const Rational& p, const Rational& q) {
  if (n < 1) throw DomainError("dimension must be positive");
  if (p.sign() <= 0 || q.sign() <= 0) throw DomainError("exponents must be positive");
  Rational N(n);
  Classification c;
  c.gap = Rational(1) / (p + Rational(1)) + Rational(1) / (q + Rational(1)) - (Rational(1) - Rational(2) / N);
  c.kind = c.gap.sign() > 0 ? Criticality::subcritical : c.gap.sign() == 0 ? Criticality::critical
                                                                          : Criticality::supercritical;
  c.in_theorem_region = c.gap >= Rational(4) / (N * N);
  return c;
}

real flux_residual(const Trajectory& t) {
  // 5-point Gauss-Legendre on every segment through the dense output
  static const real xs[5] = {-0.9061798459386639927976269L, -0.5384693101056830910363144L, 0.0L,
                             0.5384693101056830910363144L, 0.9061798459386639927976269L};
  static const real ws[5] = {0.2369268850561890875142640L, 0.4786286704993664680412915L,
                             0.5688888888888888888888889L, 0.4786286704993664680412915L,
                             0.2369268850561890875142640L};
  const real nm1 = static_cast<real>(t.n - 1), p = t.p.to_long_double(), q = t.q.to_long_double();
  auto rn = [&](real r) { return std::pow(r, nm1); };
  // first piece [0, r1] from the series: int t^{n-1} v0^p dt to leading order
  real r1 = t.samples[1].r;
  real Iu = std::pow(t.v0, p) * std::pow(r1, nm1 + 1) / (nm1 + 1);
  real Iv = std::pow(t.u0, q) * std::pow(r1, nm1 + 1) / (nm1 + 1);
  real worst = 0;
  for (const auto& seg : t.segments) {
    real lo = seg.r0, hi = std::min(seg.r0 + seg.h, t.r_end());
    real mid = (lo + hi) / 2, half = (hi - lo) / 2;
    for (int k = 0; k < 5; ++k) {
      real r = mid + half * xs[k];
      auto y = seg.eval(r);
      Iu += half * ws[k] * rn(r) * spow(y[2], p);
      Iv += half * ws[k] * rn(r) * spow(y[0], q);
    }
    auto y = seg.eval(hi);
    real ru = std::fabs(rn(hi) * y[1] + Iu) / std::max(Iu, t.abs_tol);
    real rv = std::fabs(rn(hi) * y[3] + Iv) / std::max(Iv, t.abs_tol);
    worst = std::max({worst, ru, rv});
  }
  return worst;
}

std::string to_csv(const Trajectory& t) {
  std::ostringstream os;
  os << "r,u,du,v,dv\n";
  for (const auto& s : t.samples)
    os << fmt(s.r) << ',' << fmt(s.u) << ',' << fmt(s.du) << ',' << fmt(s.v) << ',' << fmt(s.dv) << '\n';
  return os.str();
}

std::string to_svg(const Trajectory& t) {
  const double W = 640, H = 400, m = 40;
  double rmax = static_cast<double>(t.r_end());
  double ymax = static_cast<double>(std::max(t.u0, t.v0)), ymin = 0;
  for (const auto& s : t.samples) ymin = std::min({ymin, static_cast<double>(s.u), static_cast<double>(s.v)});
  if (rmax <= 0) rmax = 1;
  auto X = [&](double r) { return m + (W - 2 * m) * r / rmax; };
  auto Y = [&](double y) { return H - m - (H - 2 * m) * (y - ymin) / (ymax - ymin); };
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<line x1=\"" << m << "\" y1=\"" << Y(0) << "\" x2=\"" << W - m << "\" y2=\"" << Y(0)
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << H - m << "\" stroke=\"black\"/>\n";
  for (int c = 0; c < 2; ++c) {
    os << "<polyline fill=\"none\" stroke=\"" << (c == 0 ? "steelblue" : "darkorange") << "\" points=\"";
    for (const auto& s : t.samples)
      os << X(static_cast<double>(s.r)) << ',' << Y(static_cast<double>(c == 0 ? s.u : s.v)) << ' ';
    os << "\"/>\n";
  }
  if (t.first_zero)
    os << "<circle cx=\"" << X(static_cast<double>(t.first_zero->r)) << "\" cy=\"" << Y(0)
       << "\" r=\"4\" fill=\"red\"/>\n";
  os << "<text x=\"" << W - m << "\" y=\"" << m / 2 << "\" text-anchor=\"end\" font-size=\"12\">n="
     << t.n << " p=" << t.p.str() << " q=" << t.q.str() << "  u blue, v orange</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string to_json(const Trajectory& t) {
  nlohmann::ordered_json j;
  j["schema"] = "lec/1";
  j["kind"] = "radial";
  j["n"] = t.n;
  j["p"] = t.p.str();
  j["q"] = t.q.str();
  j["u0"] = fmt(t.u0);
  j["v0"] = fmt(t.v0);
  j["r_max"] = fmt(t.r_max);
  j["rel_tol"] = fmt(t.rel_tol);
  j["abs_tol"] = fmt(t.abs_tol);
  j["samples"] = t.samples.size();
  j["rejected_steps"] = t.rejected;
  j["r_end"] = fmt(t.r_end());
  if (t.first_zero) {
    j["first_zero"] = {{"component", component_name(t.first_zero->which)},
                       {"r", fmt(t.first_zero->r)},
                       {"err", fmt(t.first_zero->err)}};
  } else {
    j["first_zero"] = nullptr;
  }
  Classification c = classify(t.n, t.p, t.q);
  j["class"] = criticality_name(c.kind);
  j["gap"] = c.gap.str();
  j["in_theorem_region"] = c.in_theorem_region;
  return j.dump(2) + "\n";
}

}  // namespace lec::radial
