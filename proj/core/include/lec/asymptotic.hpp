/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lec/certifier.hpp"
#include "lec/poly.hpp"
#include "lec/ratfunc.hpp"

namespace lec {

/// Expansions of A1*A2 - p*q in the rational scheme:
///   case2: lead/n^2 + mid/n^3 + sum_i res_i n^i / den
///   c04:   lead/(n-1)^2 + mid/(n-1)^3 + sum_i res_i n^i / den
enum class Variant { case2, c04 };
const char* variant_name(Variant v);
Variant variant_from_name(const std::string& s);

struct Decomposition {
  Variant variant = Variant::case2;
  Rational shift;         // expansion point: 1/(n - shift)
  PolyExpr lead;          // numerator over (n - shift)^2, in d1, d2
  PolyExpr mid;           // numerator over (n - shift)^3 (P or T)
  std::vector<std::pair<unsigned, PolyExpr>> residual;  // (i, coefficient of n^i), descending, zeros omitted
  Rational den_scale;                                   // den = den_scale * prod factors
  std::vector<std::pair<PolyExpr, unsigned>> den_factors;
  PolyExpr A3, A4;
  /// Positive content of each residual coefficient (same order as `residual`).
  std::vector<Rational> contents;

  PolyExpr den() const;
  /// Coefficient of n^i (zero if absent).
  PolyExpr coefficient(unsigned i) const;
  unsigned residual_degree() const;
  /// lead/(n-s)^2 + mid/(n-s)^3 + residual/den as one rational function.
  RatFunc reassemble() const;
  std::string to_json() const;
};

/// The full expansion of A1*A2 - p*q, derived from the closed forms.
RatFunc product_margin_symbolic();

/// Throws ConsistencyError when the reassembly identity fails.
Decomposition derive_decomposition(Variant v);

/// Transcriptions used only for comparison with the derived objects.
PolyExpr printed_P();
PolyExpr printed_T();
PolyExpr printed_A3();
PolyExpr printed_A4();

/// {0 <= d2 < d1 < 2 - d2} and {0 <= d2 <= 1, 1/2 <= d1 <= 2}.
Region wide_triangle(const Rational& tau = Rational::pow2(-10));
Region enlarged_box(const Rational& tau = Rational::pow2(-10));

struct BoundResult {
  std::string name;
  std::string claim;
  Certificate cert;
};

/// Lower-bound constants c_i of the residual coefficients, i = 14..0.
const std::vector<std::pair<unsigned, Rational>>& residual_bound_constants();

/// res_i/32 >= -c (4 d1 + 12 d2) for every tabulated i; requires variant c04.
std::vector<BoundResult> verify_Ri_bounds(const Decomposition& dec, const EngineOptions& opts = {});
/// One bound with an explicit constant (used for negative controls).
BoundResult verify_Ri_bound(const Decomposition& dec, unsigned i, const Rational& c, const EngineOptions& opts = {});

/// P + 8(d1 + 3 d2) >= 0 and T + 8(d1 + 3 d2) >= 0 on the wide triangle.
BoundResult verify_mid_bound(const Decomposition& dec, const EngineOptions& opts = {});

/// Quartic lower bounds for A3 and A4.
PolyExpr A3_lower();
PolyExpr A4_lower();

struct QuarticBoundReport {
  bool certified = false;
  std::vector<BoundResult> per_n;      // n = n_lo..n_hi for A3 then A4
  std::vector<BoundResult> tail;       // n >= n_hi through t = 1/n
  std::vector<std::string> failures;
};
/// A - lower >= 0 on the wide triangle for integer n in [n_lo, n_hi] and a
/// compactified certificate for n >= n_hi. `A` and `lower` may be overridden
/// (negative controls); by default both quartics are checked.
QuarticBoundReport verify_A3A4_bounds(long n_lo = 2, long n_hi = 200, const EngineOptions& opts = {});
QuarticBoundReport verify_quartic_bound(const std::string& name, const PolyExpr& A, const PolyExpr& lower, long n_lo,
                                        long n_hi, const EngineOptions& opts = {});

/// (A - lower) * t^deg with n = 1/t, as a polynomial in t (Var::x), d1, d2.
PolyExpr compactify(const PolyExpr& f, unsigned degree_n);

/// The tail inequality in n (exact).
Rational tail_display(long n);

struct TailReport {
  long n_min = 0;
  Verdict verdict = Verdict::inconclusive;
  std::string route;  // "shifted-coefficients" or "interval+cauchy"
  PolyExpr cleared;   // display times its (positive) denominator, in n
  PolyExpr shifted;   // cleared(n_min + t), in t = Var::x
  std::vector<std::pair<std::string, bool>> denominators;  // factor, positive for n >= n_min
  std::optional<Rational> cauchy_bound;
  std::optional<Certificate> interval_cert;
  std::optional<long> refuting_n;
  std::string to_json() const;
};
TailReport verify_tail(long n_min = 35, const EngineOptions& opts = {});

struct C0Report {
  Rational c0;
  Rational C0_star;
  long n1_star = 0;
  long N_star = 0;
  bool certified = false;
  std::vector<std::pair<unsigned, Rational>> q_lower;  // certified lower bound of each Q_i
  std::vector<BoundResult> certs;
  std::string to_json() const;
};
/// Explicit (C0*, n1*, N*(c0)) for the case2 expansion.
C0Report verify_c0_asymptotic(const Rational& c0, const EngineOptions& opts = {});

}  // namespace lec
