/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#include "lec/ratfunc.hpp"

#include <cctype>

#include "lec/errors.hpp"

namespace lec {

std::pair<PolyExpr, Rational> split_content(const PolyExpr& f) {
  if (f.is_zero()) return {PolyExpr(), Rational(0)};
  Rational c = f.content();
  if (f.leading().coeff.sign() < 0) c = -c;
  return {PolyExpr(f).scale(Rational(1) / c), c};
}

bool surely_not_divisible(const PolyExpr& p, const PolyExpr& f) {
  if (p.is_zero() || f.is_constant()) return false;
  for (Var v : kAllVars)
    if (f.degree(v) > p.degree(v)) return true;
  if (f.total_degree() > p.total_degree()) return true;
  // Fixed generic point; solve f = 0 for a variable f is linear in, then
  // p must vanish there if f | p.
  static const std::array<Rational, kNumVars> generic{Rational::of(1009, 7), Rational::of(37, 101),
                                                      Rational::of(59, 113), Rational::of(17, 19)};
  for (Var v : kAllVars) {
    if (f.degree(v) != 1) continue;
    Bindings<Rational> pt;
    for (Var w : kAllVars)
      if (w != v) pt[static_cast<int>(w)] = generic[static_cast<int>(w)];
    Rational a(0), g(0);
    for (const auto& [e, c] : f.collect(v)) (e == 1 ? a : g) = c.eval(pt);
    if (a.is_zero()) continue;
    pt[static_cast<int>(v)] = -g / a;
    return !p.eval(pt).is_zero();
  }
  return false;
}

namespace {

// Exact quotient p / f after the cheap rejection tests.
std::optional<PolyExpr> try_divide(const PolyExpr& p, const PolyExpr& f) {
  if (f.total_degree() > p.total_degree() || surely_not_divisible(p, f)) return std::nullopt;
  return p.divide_exact(f);
}

}  // namespace

RatFunc::RatFunc(const PolyExpr& p) {
  if (p.is_constant()) {
    scale_ = p.is_zero() ? Rational(0) : p.constant_value();
    return;
  }
  auto [prim, c] = split_content(p);
  scale_ = c;
  factors_.emplace(std::move(prim), 1);
}

RatFunc RatFunc::ratio(const PolyExpr& num, const PolyExpr& den) {
  if (den.is_zero()) throw DomainError("division by the zero polynomial");
  RatFunc r(num);
  r.insert_poly(den, -1, true);
  return r;
}

bool RatFunc::is_polynomial() const {
  for (const auto& [f, e] : factors_)
    if (e < 0) return false;
  return true;
}

PolyExpr RatFunc::as_polynomial() const {
  if (!is_polynomial()) throw DomainError("not a polynomial: " + str());
  return num();
}

PolyExpr RatFunc::num() const {
  PolyExpr out(scale_);
  for (const auto& [f, e] : factors_)
    if (e > 0) out *= f.pow(static_cast<unsigned>(e));
  return out;
}

std::vector<Factor> RatFunc::den_factors() const {
  std::vector<Factor> out;
  for (const auto& [f, e] : factors_)
    if (e < 0) out.push_back({f, -e});
  return out;
}

PolyExpr RatFunc::den() const {
  PolyExpr out(1);
  for (const auto& [f, e] : factors_)
    if (e < 0) out *= f.pow(static_cast<unsigned>(-e));
  return out;
}

void RatFunc::multiply_factor(const PolyExpr& f, int e) {
  if (e == 0) return;
  auto it = factors_.find(f);
  if (it == factors_.end()) {
    factors_.emplace(f, e);
    return;
  }
  it->second += e;
  if (it->second == 0) factors_.erase(it);
}

void RatFunc::insert_poly(const PolyExpr& p, int e, bool split) {
  if (p.is_zero()) {
    if (e < 0) throw DomainError("division by the zero polynomial");
    scale_ = Rational(0);
    factors_.clear();
    return;
  }
  auto [prim, c] = split_content(p);
  scale_ *= c.pow(e);
  if (prim.is_constant()) return;
  if (split && !factors_.count(prim)) {
    std::vector<PolyExpr> known;
    for (const auto& [f, k] : factors_) known.push_back(f);
    for (const auto& f : known) {
      while (!prim.is_constant()) {
        auto q = try_divide(prim, f);
        if (!q) break;
        auto [qp, qc] = split_content(*q);
        scale_ *= qc.pow(e);
        prim = std::move(qp);
        multiply_factor(f, e);
      }
    }
    if (prim.is_constant()) return;
  }
  multiply_factor(prim, e);
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.scale_ = -r.scale_;
  return r;
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  // Common part: per-factor minimum exponent over both sides (absent = 0).
  std::map<PolyExpr, int> common;
  for (const auto& [f, e] : factors_) common[f] = 0;
  for (const auto& [f, e] : o.factors_) common[f] = 0;
  for (auto& [f, g] : common) {
    auto a = factors_.find(f);
    auto b = o.factors_.find(f);
    int ea = a == factors_.end() ? 0 : a->second;
    int eb = b == o.factors_.end() ? 0 : b->second;
    g = std::min(ea, eb);
  }
  auto side = [&](const RatFunc& x) {
    PolyExpr out(x.scale_);
    for (const auto& [f, g] : common) {
      auto it = x.factors_.find(f);
      int e = it == x.factors_.end() ? 0 : it->second;
      if (e - g > 0) out *= f.pow(static_cast<unsigned>(e - g));
    }
    return out;
  };
  PolyExpr sum = side(*this) + side(o);
  scale_ = Rational(1);
  factors_.clear();
  if (sum.is_zero()) {
    scale_ = Rational(0);
    return *this;
  }
  for (const auto& [f, g] : common)
    if (g != 0) factors_.emplace(f, g);
  insert_poly(sum, 1, false);
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  if (is_zero() || o.is_zero()) {
    scale_ = Rational(0);
    factors_.clear();
    return *this;
  }
  scale_ *= o.scale_;
  for (const auto& [f, e] : o.factors_) multiply_factor(f, e);
  return *this;
}

RatFunc& RatFunc::operator/=(const RatFunc& o) {
  if (o.is_zero()) throw DomainError("division by the zero rational function");
  if (is_zero()) return *this;
  scale_ /= o.scale_;
  for (const auto& [f, e] : o.factors_) multiply_factor(f, -e);
  return *this;
}

RatFunc RatFunc::pow(int e) const {
  if (e == 0) return RatFunc(1);
  if (is_zero()) {
    if (e < 0) throw DomainError("zero to a negative power");
    return RatFunc();
  }
  RatFunc r;
  r.scale_ = scale_.pow(e);
  for (const auto& [f, k] : factors_) r.factors_.emplace(f, k * e);
  return r;
}

RatFunc RatFunc::normalized() const {
  RatFunc r = *this;
  // Split any factor that is divisible by another one until no pair divides.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [g, eg] : r.factors_) {
      for (const auto& [f, ef] : r.factors_) {
        if (&f == &g) continue;
        auto q = try_divide(g, f);
        if (!q) continue;
        PolyExpr big = g, small = f;
        int e = eg;
        r.factors_.erase(big);
        r.multiply_factor(small, e);
        r.insert_poly(*q, e, false);
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
  return r;
}

namespace {

RatFunc substitute_poly(const PolyExpr& p, const Bindings<RatFunc>& b) {
  bool all_poly = true;
  for (const auto& v : b)
    if (v && !v->is_polynomial()) all_poly = false;
  if (all_poly) {
    Bindings<PolyExpr> pb;
    for (int i = 0; i < kNumVars; ++i)
      if (b[i]) pb[i] = b[i]->num();
    return RatFunc(p.substitute(pb));
  }
  std::array<std::vector<RatFunc>, kNumVars> powers;
  for (Var v : kAllVars) {
    int i = static_cast<int>(v);
    if (!b[i]) continue;
    powers[i].push_back(RatFunc(1));
    for (unsigned k = 1; k <= p.degree(v); ++k) powers[i].push_back(powers[i].back() * *b[i]);
  }
  RatFunc out;
  for (const auto& t : p.terms()) {
    std::array<unsigned, kNumVars> keep{};
    RatFunc term(t.coeff);
    for (Var v : kAllVars) {
      int i = static_cast<int>(v);
      unsigned e = t.mono.exponent(v);
      if (e == 0) continue;
      if (b[i]) term *= powers[i][e];
      else keep[i] = e;
    }
    term *= RatFunc(PolyExpr::monomial(Rational(1), Monomial::of(keep[0], keep[1], keep[2], keep[3])));
    out += term;
  }
  return out;
}

}  // namespace

RatFunc RatFunc::substitute(const Bindings<RatFunc>& b) const {
  RatFunc out(scale_);
  for (const auto& [f, e] : factors_) {
    RatFunc fs = substitute_poly(f, b);
    if (fs.is_zero()) {
      if (e < 0) throw DomainError("denominator factor (" + f.str() + ") vanishes under substitution");
      return RatFunc();
    }
    out *= fs.pow(e);
  }
  return out;
}

RatFunc RatFunc::substitute(Var v, const RatFunc& value) const {
  Bindings<RatFunc> b;
  b[static_cast<int>(v)] = value;
  return substitute(b);
}

Rational RatFunc::eval_exact(const Bindings<Rational>& point) const {
  Rational out = scale_;
  for (const auto& [f, e] : factors_) {
    Rational fv = f.eval(point);
    if (fv.is_zero() && e < 0) throw PoleError("pole: factor (" + f.str() + ") vanishes");
    out *= fv.pow(e);
  }
  return out;
}

std::optional<Interval> RatFunc::eval_interval(const Bindings<Interval>& box) const {
  Interval out(scale_);
  for (const auto& [f, e] : factors_) {
    Interval fv = f.eval_interval(box);
    if (e < 0 && fv.contains_zero()) return std::nullopt;
    out *= fv.pow(e);
  }
  return out;
}

std::string RatFunc::str() const {
  if (is_polynomial()) return num().str();
  auto wrap = [](const PolyExpr& p) { return p.size() > 1 ? "(" + p.str() + ")" : p.str(); };
  auto power = [&](const PolyExpr& f, int e) { return e == 1 ? wrap(f) : wrap(f) + "^" + std::to_string(e); };
  std::string head, den;
  for (const auto& [f, e] : factors_) {
    if (e > 0) head += (head.empty() ? "" : "*") + power(f, e);
    else den += (den.empty() ? "" : "*") + power(f, -e);
  }
  if (head.empty()) {
    head = scale_.str();
  } else if (scale_ == Rational(-1)) {
    head = "-" + head;
  } else if (scale_ != Rational(1)) {
    head = scale_.str() + "*" + head;
  }
  return head + "/(" + den + ")";
}

ClearedForm clear_denominators(const RatFunc& f) {
  ClearedForm out{f.num(), f.den_factors(), f.den(), ""};
  std::vector<std::string> conds;
  for (const auto& [p, m] : out.factors) {
    // a*v + b with a > 0 in a single variable: explicit half-line.
    std::optional<Var> only;
    int used = 0;
    for (Var v : kAllVars)
      if (p.uses(v)) {
        only = v;
        ++used;
      }
    if (used == 1 && p.total_degree() == 1) {
      Rational a(0), b(0);
      for (const auto& [e, c] : p.collect(*only)) (e == 1 ? a : b) = c.constant_value();
      Rational root = -b / a;
      std::string var(var_name(*only));
      conds.push_back(m % 2 == 1 ? var + " > " + root.str() : var + " != " + root.str());
    } else {
      conds.push_back(m % 2 == 1 ? "(" + p.str() + ") > 0" : "(" + p.str() + ") != 0");
    }
  }
  out.sign_domain = conds.empty() ? "den = 1" : "den > 0 for ";
  for (std::size_t i = 0; i < conds.size(); ++i) out.sign_domain += (i ? ", " : "") + conds[i];
  return out;
}

// --- parser ---------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  RatFunc parse_all() {
    RatFunc r = expr();
    skip();
    if (pos_ < s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  // '-' or U+2212.
  bool eat_minus() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '-') {
      ++pos_;
      return true;
    }
    if (s_.substr(pos_).starts_with("\xe2\x88\x92")) {
      pos_ += 3;
      return true;
    }
    return false;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatFunc expr() {
    RatFunc acc = term();
    for (;;) {
      if (eat('+')) acc += term();
      else if (eat_minus()) acc -= term();
      else return acc;
    }
  }

  RatFunc term() {
    RatFunc acc = unary();
    for (;;) {
      if (eat('*')) {
        acc *= unary();
      } else if (eat('/')) {
        std::size_t at = pos_;
        RatFunc d = unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        acc /= d;
      } else {
        return acc;
      }
    }
  }

  RatFunc unary() {
    if (eat_minus()) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  RatFunc power() {
    RatFunc base = atom();
    if (!eat('^')) return base;
    bool neg = eat_minus();
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected integer exponent");
    if (pos_ - start > 4) fail("exponent too large");
    int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
    if (neg && base.is_zero()) throw ParseError("zero to a negative power", start);
    return base.pow(neg ? -e : e);
  }

  RatFunc atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '.') {
        ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      return RatFunc(Rational::parse(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      auto name = s_.substr(start, pos_ - start);
      auto v = var_from_name(name);
      if (!v) throw ParseError("unknown identifier '" + std::string(name) + "'", start);
      return RatFunc::var(*v);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

RatFunc RatFunc::parse(std::string_view text) { return Parser(text).parse_all(); }

PolyExpr PolyExpr::parse(std::string_view text) {
  RatFunc r = RatFunc::parse(text).normalized();
  if (!r.is_polynomial()) throw ParseError("expression is not a polynomial", 0);
  return r.num();
}

}  // namespace lec
