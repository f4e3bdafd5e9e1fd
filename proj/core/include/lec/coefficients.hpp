/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#pragma once

#include <functional>
#include <optional>
#include <string>

#include "lec/errors.hpp"
#include "lec/interval.hpp"
#include "lec/ivdual.hpp"
#include "lec/ratfunc.hpp"
#include "lec/rational.hpp"

namespace lec {

enum class Scheme { I, II };
const char* scheme_name(Scheme s);

/// Exponents of the system for dimension n and shifts d1, d2:
/// 1/(p+1) = 1/2 - d1/n, 1/(q+1) = 1/2 - d2/n.
struct ExponentData {
  long n = 0;
  Rational d1, d2;
  Rational p, q;
  std::optional<Rational> alpha, beta;  // absent when pq = 1
  Rational sobolev_gap;                  // 1/(p+1) + 1/(q+1) - (1 - 2/n)
};

/// Throws DomainError unless n >= 3 and |d1|, |d2| < n/2.
ExponentData exponents_from_d(long n, const Rational& d1, const Rational& d2);
std::string to_json(const ExponentData& e);

/// Field values common to both schemes. T is Rational or RatFunc for the
/// exact scheme, Interval or IvDual for the surd scheme.
template <class T>
struct Coefficients {
  Scheme scheme = Scheme::I;
  T p, q, r, s;
  T k1, k2, theta1, theta2;
  T mu_r, mu_s, xi_r, xi_s;
  T L1, L2;  // 3r/2 - (n+2)k1/n and its mirror
  T delta1, delta2;
  T alpha1, alpha2, beta1, beta2, gamma1, gamma2;
  T A1, A2;
  std::optional<T> rho1, rho2;
  std::optional<Rational> eps0;

  /// (name, value) in a fixed order; rho1/rho2 only when present.
  void for_each(const std::function<void(const char*, const T&)>& f) const;
};

namespace detail {

inline void require_nonzero(const Rational& v, const char* name) {
  if (v.is_zero()) throw DegeneratePointError(name, std::string(name) + " vanishes at this point");
}
inline void require_nonzero(const RatFunc& v, const char* name) {
  if (v.is_zero()) throw DegeneratePointError(name, std::string(name) + " is identically zero");
}
inline void require_nonzero(const Interval& v, const char* name) {
  if (v.contains_zero()) throw DegeneratePointError(name, std::string(name) + " enclosure contains zero");
}
inline void require_nonzero(const IvDual& v, const char* name) { require_nonzero(v.value(), name); }

template <class T>
T sq(const T& x) { return x * x; }
inline Interval sq(const Interval& x) { return x.sqr(); }
inline IvDual sq(const IvDual& x) { return x.sqr(); }

}  // namespace detail

template <class T>
T mu(const T& n, const T& x) {
  return ((n + T(2)) * n + (n * n - T(3) * n - T(1)) * x - n * (n + T(2)) * x * x / T(4)) / detail::sq(n - T(1));
}

template <class T>
T xi(const T& n, const T& x) { return mu(n, x) - x; }

/// (n+2)(-n x^2 - 4x + 4n) / (4(n-1)^2), the closed form of xi.
template <class T>
T xi_closed(const T& n, const T& x) {
  return (n + T(2)) * (-n * x * x - T(4) * x + T(4) * n) / (T(4) * detail::sq(n - T(1)));
}

/// x^2 (8n - 4 - 4nx - n^2 x^2) / (4n^2).
template <class T>
T obata_margin(const T& n, const T& x) {
  return x * x * (T(8) * n - T(4) - T(4) * n * x - n * n * x * x) / (T(4) * n * n);
}

/// (-(d1+3d2) - (2-d1-d2)n) / (d1+d2). Throws DomainError when d1 + d2 = 0.
Rational scaling_exponent(long n, const Rational& d1, const Rational& d2);

/// The exponent-side quantities r, s, p, q shared by both schemes.
template <class T>
struct Shifts {
  T p, q, r, s;
};

template <class T>
Shifts<T> shifts(const T& n, const T& d1, const T& d2) {
  Shifts<T> out;
  out.p = (n + T(2) * d1) / (n - T(2) * d1);
  out.q = (n + T(2) * d2) / (n - T(2) * d2);
  out.r = -T(3) * (d1 - d2) / (n - T(2) * d2);
  out.s = (d1 - d2) / (n - T(2) * d1);
  return out;
}

/// One half of the coefficient assembly: given r, p, k, theta and the
/// weight L = 3r/2 - (n+2)k/n, fill delta, alpha, beta, gamma, A using the
/// defining formulas.
template <class T>
struct Half {
  T delta, alpha, beta, gamma, A;
};

template <class T>
Half<T> half_from_defining(const T& n, const T& r, const T& p, const T& k, const T& theta, const T& L,
                           const char* delta_name) {
  Half<T> h;
  const T nm1 = n - T(1);
  h.delta = (r + theta * p) * (r + theta * (p - T(2)) + T(1)) + theta * (theta - T(1)) * p;
  detail::require_nonzero(h.delta, delta_name);
  h.alpha = -nm1 / n * k * k + k * (r - T(1)) - r * (r - T(1)) / T(2);
  const T b = T(2) * theta * (p - T(1)) + r + T(1);
  h.beta = L * b / h.delta - nm1 / n;
  h.gamma = L * p / h.delta;
  h.A = b - nm1 / n * h.delta / L;
  return h;
}

/// Exact coefficient choice: k = n/(2(n-1)) (r - 2 + r/n + r^2/2), for
/// which n L/(n-1) = mu(r). All fields from the defining formulas.
template <class T>
Coefficients<T> scheme1_generic(const T& n, const T& d1, const T& d2) {
  Coefficients<T> c;
  c.scheme = Scheme::I;
  auto sh = shifts(n, d1, d2);
  c.p = sh.p;
  c.q = sh.q;
  c.r = sh.r;
  c.s = sh.s;
  const T nm1 = n - T(1);
  auto k_of = [&](const T& x) { return n / (T(2) * nm1) * (x - T(2) + x / n + x * x / T(2)); };
  c.k1 = k_of(c.r);
  c.k2 = k_of(c.s);
  c.mu_r = mu(n, c.r);
  c.mu_s = mu(n, c.s);
  detail::require_nonzero(c.mu_r, "mu_r");
  detail::require_nonzero(c.mu_s, "mu_s");
  c.xi_r = c.mu_r - c.r;
  c.xi_s = c.mu_s - c.s;
  c.L1 = T(3) * c.r / T(2) - (n + T(2)) * c.k1 / n;
  c.L2 = T(3) * c.s / T(2) - (n + T(2)) * c.k2 / n;
  c.theta1 = (c.mu_r - c.r) / c.p;
  c.theta2 = (c.mu_s - c.s) / c.q;
  auto h1 = half_from_defining(n, c.r, c.p, c.k1, c.theta1, c.L1, "delta1");
  auto h2 = half_from_defining(n, c.s, c.q, c.k2, c.theta2, c.L2, "delta2");
  c.delta1 = h1.delta;
  c.delta2 = h2.delta;
  c.alpha1 = h1.alpha;
  c.alpha2 = h2.alpha;
  c.beta1 = h1.beta;
  c.beta2 = h2.beta;
  c.gamma1 = h1.gamma;
  c.gamma2 = h2.gamma;
  c.A1 = h1.A;
  c.A2 = h2.A;
  return c;
}

/// Closed forms valid under the exact choice, in terms of m = mu(r):
/// delta = r^2/p + r + (p-1) m^2/p, A = (1 - r/m)((p-1)m/p + r/p + 1),
/// A - p = (m - p - r)((p-1)m + r)/(m p), alpha = r^2(8n-4-4nr-n^2r^2)/(16n(n-1)).
template <class T>
struct ClosedForms {
  T delta, A, A_minus_p, alpha;
};

template <class T>
ClosedForms<T> scheme1_closed(const T& n, const T& r, const T& p, const T& m) {
  ClosedForms<T> f;
  f.delta = r * r / p + r + (p - T(1)) * m * m / p;
  f.A = (T(1) - r / m) * ((p - T(1)) * m / p + r / p + T(1));
  f.A_minus_p = (m - p - r) * ((p - T(1)) * m + r) / (m * p);
  f.alpha = r * r * (T(8) * n - T(4) - T(4) * n * r - n * n * r * r) / (T(16) * n * (n - T(1)));
  return f;
}

/// Discriminant of alpha as a quadratic in k: (1-x)((n-2)x+n)/n.
template <class T>
T surd_argument(const T& n, const T& x) {
  return (T(1) - x) * ((n - T(2)) * x + n) / n;
}

/// Surd choice k = n/(2(n-1)) (x - 1 - sqrt(D)) + eps0 with D the surd
/// argument; rho = n L/(n-1). alpha is evaluated in the completed-square
/// form -(n-1)/n (k - c)^2 + n D/(4(n-1)), c = n(x-1)/(2(n-1)), which is
/// the defining quadratic rewritten; it keeps the enclosure of alpha tight
/// near its root. Throws DomainError if D < 0 somewhere.
template <class T>
Coefficients<T> scheme2_generic(const T& n, const T& d1, const T& d2, const Rational& eps0, const Rational& width) {
  Coefficients<T> c;
  c.scheme = Scheme::II;
  c.eps0 = eps0;
  auto sh = shifts(n, d1, d2);
  c.p = sh.p;
  c.q = sh.q;
  c.r = sh.r;
  c.s = sh.s;
  const T nm1 = n - T(1);
  const T e(eps0);
  auto choose = [&](const T& x, T& k, T& alpha) {
    T D = surd_argument(n, x);
    T root = sqrt(D, width);
    T half = n / (T(2) * nm1);
    T centre = half * (x - T(1));
    k = half * (x - T(1) - root) + e;
    alpha = -nm1 / n * detail::sq(k - centre) + n * D / (T(4) * nm1);
  };
  choose(c.r, c.k1, c.alpha1);
  choose(c.s, c.k2, c.alpha2);
  c.mu_r = mu(n, c.r);
  c.mu_s = mu(n, c.s);
  c.xi_r = c.mu_r - c.r;
  c.xi_s = c.mu_s - c.s;
  c.L1 = T(3) * c.r / T(2) - (n + T(2)) * c.k1 / n;
  c.L2 = T(3) * c.s / T(2) - (n + T(2)) * c.k2 / n;
  c.rho1 = n / nm1 * c.L1;
  c.rho2 = n / nm1 * c.L2;
  detail::require_nonzero(c.L1, "rho1");
  detail::require_nonzero(c.L2, "rho2");
  c.theta1 = (*c.rho1 - c.r) / c.p;
  c.theta2 = (*c.rho2 - c.s) / c.q;
  // Simplified delta (exact under theta = (rho - r)/p); tighter than the product form.
  c.delta1 = c.r * c.r / c.p + c.r + (c.p - T(1)) * detail::sq(*c.rho1) / c.p;
  c.delta2 = c.s * c.s / c.q + c.s + (c.q - T(1)) * detail::sq(*c.rho2) / c.q;
  detail::require_nonzero(c.delta1, "delta1");
  detail::require_nonzero(c.delta2, "delta2");
  const T b1 = T(2) * c.theta1 * (c.p - T(1)) + c.r + T(1);
  const T b2 = T(2) * c.theta2 * (c.q - T(1)) + c.s + T(1);
  c.beta1 = c.L1 * b1 / c.delta1 - nm1 / n;
  c.beta2 = c.L2 * b2 / c.delta2 - nm1 / n;
  c.gamma1 = c.L1 * c.p / c.delta1;
  c.gamma2 = c.L2 * c.q / c.delta2;
  c.A1 = b1 - nm1 / n * c.delta1 / c.L1;
  c.A2 = b2 - nm1 / n * c.delta2 / c.L2;
  return c;
}

/// Exact scheme at a rational point. Preconditions: n >= 3, d2 >= 0,
/// d1 >= d2, d1 < n/2. Throws DegeneratePointError naming mu_r, mu_s,
/// delta1 or delta2 when one vanishes, and DomainError when q = 1 with
/// s in {0, -1} (or p = 1 with r in {0, -1}).
Coefficients<Rational> scheme1(long n, const Rational& d1, const Rational& d2);

/// Exact scheme over Q(n, d1, d2), fields as rational functions.
Coefficients<RatFunc> scheme1_symbolic();

/// Surd scheme at a rational point, every field an enclosure. The surd
/// is enclosed to `width`; alpha1/alpha2 have width at most 2*width.
/// Throws DomainError for a negative surd argument.
Coefficients<Interval> scheme2(long n, const Rational& d1, const Rational& d2, const Rational& eps0, const Rational& width);

/// The validity side conditions of the estimate: for p = 1, r not in {0, -1};
/// otherwise (p-1) L1 delta1 > 0; mirrored for q. Exact scheme only.
bool side_conditions_hold(const Coefficients<Rational>& c);

/// Surd-scheme side conditions proven by the enclosures (false = unproven).
bool side_conditions_proven(const Coefficients<Interval>& c);

/// JSON report: scheme, inputs and every field (exact strings, or
/// {"lo","hi"} enclosures with a decimal midpoint).
std::string to_json(const Coefficients<Rational>& c, long n, const Rational& d1, const Rational& d2);
std::string to_json(const Coefficients<Interval>& c, long n, const Rational& d1, const Rational& d2);

template <class T>
void Coefficients<T>::for_each(const std::function<void(const char*, const T&)>& f) const {
  f("p", p);
  f("q", q);
  f("r", r);
  f("s", s);
  f("k1", k1);
  f("k2", k2);
  f("theta1", theta1);
  f("theta2", theta2);
  f("mu_r", mu_r);
  f("mu_s", mu_s);
  f("xi_r", xi_r);
  f("xi_s", xi_s);
  if (rho1) f("rho1", *rho1);
  if (rho2) f("rho2", *rho2);
  f("L1", L1);
  f("L2", L2);
  f("delta1", delta1);
  f("delta2", delta2);
  f("alpha1", alpha1);
  f("alpha2", alpha2);
  f("beta1", beta1);
  f("beta2", beta2);
  f("gamma1", gamma1);
  f("gamma2", gamma2);
  f("A1", A1);
  f("A2", A2);
}

}  // namespace lec
