/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#include "lec/bernstein.hpp"

#include <algorithm>

#include "lec/errors.hpp"

namespace lec {

namespace {

Rational binom(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

template <class T, class F>
void for_each_fiber(std::vector<T>& data, std::size_t stride, unsigned len, F&& f) {
  std::size_t block = stride * len;
  std::vector<T*> fiber(len);
  for (std::size_t base = 0; base < data.size(); base += block)
    for (std::size_t off = 0; off < stride; ++off) {
      for (unsigned j = 0; j < len; ++j) fiber[j] = &data[base + off + j * stride];
      f(fiber);
    }
}

}  // namespace

std::size_t BernsteinPatch::stride(std::size_t axis) const {
  std::size_t s = 1;
  for (std::size_t i = deg_.size(); i-- > axis + 1;) s *= deg_[i] + 1;
  return s;
}

BernsteinPatch BernsteinPatch::build(const PolyExpr& p, const std::vector<Var>& vars, const std::vector<Interval>& box) {
  if (vars.size() != box.size() || vars.empty()) throw DomainError("bernstein: vars/box size mismatch");
  for (Var v : kAllVars)
    if (p.uses(v) && std::find(vars.begin(), vars.end(), v) == vars.end())
      throw DomainError("bernstein: polynomial uses variable outside the box: " + std::string(var_name(v)));
  BernsteinPatch b;
  for (Var v : vars) b.deg_.push_back(p.degree(v));
  std::size_t total = 1;
  for (unsigned m : b.deg_) total *= m + 1;
  std::vector<Rational> a(total, Rational(0));
  for (const auto& t : p.terms()) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) idx += t.mono.exponent(vars[i]) * b.stride(i);
    a[idx] += t.coeff;
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    unsigned m = b.deg_[i];
    if (m == 0) continue;
    const Rational lo = box[i].lo(), w = box[i].width();
    std::vector<Rational> lo_pow(m + 1, Rational(1)), w_pow(m + 1, Rational(1));
    for (unsigned j = 1; j <= m; ++j) {
      lo_pow[j] = lo_pow[j - 1] * lo;
      w_pow[j] = w_pow[j - 1] * w;
    }
    std::vector<Rational> c(m + 1);
    for_each_fiber(a, b.stride(i), m + 1, [&](std::vector<Rational*>& f) {
      // Affine change x = lo + w*u, then power -> Bernstein basis on [0,1].
      for (unsigned l = 0; l <= m; ++l) {
        Rational s(0);
        for (unsigned j = l; j <= m; ++j)
          if (!f[j]->is_zero()) s += *f[j] * binom(j, l) * lo_pow[j - l];
        c[l] = s * w_pow[l];
      }
      for (unsigned k = 0; k <= m; ++k) {
        Rational s(0);
        for (unsigned j = 0; j <= k; ++j)
          if (!c[j].is_zero()) s += c[j] * binom(k, j) / binom(m, j);
        *f[k] = s;
      }
    });
  }
  Integer l = 1, g = 0;
  for (const auto& x : a) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.raw().get_den_mpz_t());
  b.coeff_.reserve(total);
  for (const auto& x : a) {
    Integer v = (x * Rational(l)).num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    b.coeff_.push_back(std::move(v));
  }
  if (g == 0) g = 1;
  for (auto& v : b.coeff_) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  b.scale_ = Rational::of(g, l);
  return b;
}

Rational BernsteinPatch::min_coefficient() const {
  const Integer* m = &coeff_[0];
  for (const auto& v : coeff_)
    if (v < *m) m = &v;
  return Rational(*m) * scale_;
}

Interval BernsteinPatch::range() const {
  auto [mn, mx] = std::minmax_element(coeff_.begin(), coeff_.end());
  return Interval(Rational(*mn) * scale_, Rational(*mx) * scale_);
}

Rational BernsteinPatch::corner(unsigned mask) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < deg_.size(); ++i)
    if (mask & (1u << i)) idx += deg_[i] * stride(i);
  return Rational(coeff_[idx]) * scale_;
}

void BernsteinPatch::reduce() {
  // Strip the common power of two; cheap and keeps coefficient growth linear.
  mp_bitcnt_t t = ~mp_bitcnt_t(0);
  for (const auto& v : coeff_)
    if (v != 0) t = std::min(t, mpz_scan1(v.get_mpz_t(), 0));
  if (t == ~mp_bitcnt_t(0) || t == 0) return;
  for (auto& v : coeff_) mpz_fdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), t);
  scale_ *= Rational::pow2(static_cast<long>(t));
}

std::pair<BernsteinPatch, BernsteinPatch> BernsteinPatch::split(std::size_t axis) const {
  BernsteinPatch lo = *this, hi = *this;
  unsigned m = deg_[axis];
  if (m == 0) return {lo, hi};
  std::size_t s = stride(axis);
  std::vector<Integer> work(m + 1);
  std::size_t block = s * (m + 1);
  for (std::size_t base = 0; base < coeff_.size(); base += block)
    for (std::size_t off = 0; off < s; ++off) {
      std::size_t first = base + off;
      for (unsigned j = 0; j <= m; ++j) work[j] = coeff_[first + j * s];
      // Level k of the (unnormalized) de Casteljau triangle lives in work[0..m-k].
      lo.coeff_[first] = work[0];
      hi.coeff_[first + m * s] = work[m];
      for (unsigned k = 1; k <= m; ++k) {
        for (unsigned j = 0; j + k <= m; ++j) work[j] += work[j + 1];
        // left_k = c^(k)_0 * 2^(m-k), right_{m-k} = c^(k)_{m-k} * 2^(m-k)
        Integer& l = lo.coeff_[first + k * s];
        mpz_mul_2exp(l.get_mpz_t(), work[0].get_mpz_t(), m - k);
        Integer& h = hi.coeff_[first + (m - k) * s];
        mpz_mul_2exp(h.get_mpz_t(), work[m - k].get_mpz_t(), m - k);
      }
    }
  // The k = 0 entries need the same 2^m weighting as the rest.
  for (std::size_t base = 0; base < coeff_.size(); base += block)
    for (std::size_t off = 0; off < s; ++off) {
      std::size_t first = base + off;
      mpz_mul_2exp(lo.coeff_[first].get_mpz_t(), lo.coeff_[first].get_mpz_t(), m);
      mpz_mul_2exp(hi.coeff_[first + m * s].get_mpz_t(), hi.coeff_[first + m * s].get_mpz_t(), m);
    }
  Rational sc = scale_ * Rational::pow2(-static_cast<long>(m));
  lo.scale_ = sc;
  hi.scale_ = sc;
  lo.reduce();
  hi.reduce();
  return {std::move(lo), std::move(hi)};
}

}  // namespace lec
