/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#include "lec/poly.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "lec/errors.hpp"

namespace lec {

std::string_view var_name(Var v) {
  switch (v) {
    case Var::n: return "n";
    case Var::d1: return "d1";
    case Var::d2: return "d2";
    case Var::x: return "x";
  }
  return "?";
}

std::optional<Var> var_from_name(std::string_view name) {
  for (Var v : kAllVars)
    if (var_name(v) == name) return v;
  return std::nullopt;
}

Monomial Monomial::of(unsigned e_n, unsigned e_d1, unsigned e_d2, unsigned e_x) {
  unsigned total = e_n + e_d1 + e_d2 + e_x;
  if (total > kMaxExponent) throw DomainError("monomial degree overflow");
  std::uint64_t k = total;
  k = (k << kFieldBits) | e_n;
  k = (k << kFieldBits) | e_d1;
  k = (k << kFieldBits) | e_d2;
  k = (k << kFieldBits) | e_x;
  return Monomial(k);
}

Monomial Monomial::var(Var v, unsigned e) {
  std::array<unsigned, kNumVars> ex{};
  ex[static_cast<int>(v)] = e;
  return of(ex[0], ex[1], ex[2], ex[3]);
}

bool Monomial::divides(Monomial o) const {
  for (Var v : kAllVars)
    if (exponent(v) > o.exponent(v)) return false;
  return true;
}

Monomial Monomial::without(Var v) const {
  std::uint64_t e = exponent(v);
  return Monomial(key_ - (e << shift(v)) - (e << (4 * kFieldBits)));
}

std::string Monomial::str() const {
  std::string out;
  for (Var v : kAllVars) {
    unsigned e = exponent(v);
    if (e == 0) continue;
    if (!out.empty()) out += '*';
    out += var_name(v);
    if (e > 1) out += '^' + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

PolyExpr::PolyExpr(const Rational& c) {
  if (!c.is_zero()) terms_.push_back({Monomial(), c});
}

PolyExpr PolyExpr::var(Var v) { return monomial(Rational(1), Monomial::var(v)); }

PolyExpr PolyExpr::monomial(const Rational& c, Monomial m) {
  PolyExpr p;
  if (!c.is_zero()) p.terms_.push_back({m, c});
  return p;
}

PolyExpr PolyExpr::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.mono > b.mono; });
  PolyExpr p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
  return p;
}

Rational PolyExpr::constant_value() const {
  if (!is_constant()) throw DomainError("polynomial is not constant: " + str());
  return terms_.empty() ? Rational(0) : terms_[0].coeff;
}

Rational PolyExpr::constant_term() const {
  if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coeff;
  return Rational(0);
}

unsigned PolyExpr::degree(Var v) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(v));
  return d;
}

unsigned PolyExpr::total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

PolyExpr PolyExpr::operator-() const {
  PolyExpr p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

namespace {

// Merge two sorted term lists, b scaled by sign.
std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool negate_b) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].mono > b[j].mono)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].mono > a[i].mono) {
      out.push_back({b[j].mono, negate_b ? -b[j].coeff : b[j].coeff});
      ++j;
    } else {
      Rational c = negate_b ? a[i].coeff - b[j].coeff : a[i].coeff + b[j].coeff;
      if (!c.is_zero()) out.push_back({a[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

Integer lcm_of_dens(const std::vector<Term>& ts) {
  Integer l = 1;
  for (const auto& t : ts) {
    const mpz_class& d = t.coeff.raw().get_den();
    if (d != 1) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  return l;
}

std::vector<std::pair<Monomial, Integer>> scaled(const std::vector<Term>& ts, const Integer& l) {
  std::vector<std::pair<Monomial, Integer>> out;
  out.reserve(ts.size());
  for (const auto& t : ts) {
    Integer v = t.coeff.raw().get_num();
    if (l != 1) {
      Integer f;
      mpz_divexact(f.get_mpz_t(), l.get_mpz_t(), t.coeff.raw().get_den_mpz_t());
      v *= f;
    }
    out.emplace_back(t.mono, std::move(v));
  }
  return out;
}

}  // namespace

PolyExpr& PolyExpr::operator+=(const PolyExpr& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return *this = o;
  terms_ = merge(terms_, o.terms_, false);
  return *this;
}

PolyExpr& PolyExpr::operator-=(const PolyExpr& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge(terms_, o.terms_, true);
  return *this;
}

PolyExpr& PolyExpr::scale(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

PolyExpr& PolyExpr::operator*=(const PolyExpr& o) { return *this = *this * o; }

PolyExpr operator*(const PolyExpr& a, const PolyExpr& b) {
  if (a.is_zero() || b.is_zero()) return PolyExpr();
  if (a.is_constant()) return PolyExpr(b).scale(a.terms_[0].coeff);
  if (b.is_constant()) return PolyExpr(a).scale(b.terms_[0].coeff);
  // Integer accumulation over common denominators, one division at the end.
  Integer la = lcm_of_dens(a.terms_), lb = lcm_of_dens(b.terms_);
  auto sa = scaled(a.terms_, la), sb = scaled(b.terms_, lb);
  std::unordered_map<std::uint64_t, Integer> acc;
  acc.reserve(sa.size() * sb.size() / 2 + 16);
  for (const auto& [ma, ca] : sa)
    for (const auto& [mb, cb] : sb) {
      Integer& slot = acc[(ma * mb).key()];
      mpz_addmul(slot.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    }
  std::vector<std::pair<std::uint64_t, Integer*>> keys;
  keys.reserve(acc.size());
  for (auto& [k, v] : acc)
    if (v != 0) keys.emplace_back(k, &v);
  std::sort(keys.begin(), keys.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  Integer den = la * lb;
  PolyExpr out;
  out.terms_.reserve(keys.size());
  for (auto& [k, v] : keys) {
    out.terms_.push_back({Monomial::from_key(k), den == 1 ? Rational(*v) : Rational::of(*v, den)});
  }
  return out;
}

bool operator<(const PolyExpr& a, const PolyExpr& b) {
  std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Term& x = a.terms_[i];
    const Term& y = b.terms_[i];
    if (x.mono != y.mono) return x.mono < y.mono;
    if (x.coeff != y.coeff) return x.coeff < y.coeff;
  }
  return a.terms_.size() < b.terms_.size();
}

PolyExpr PolyExpr::pow(unsigned e) const {
  PolyExpr result(1), base = *this;
  while (e > 0) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e > 0) base *= base;
  }
  return result;
}

Rational PolyExpr::content() const {
  if (terms_.empty()) return Rational(1);
  Integer g = 0, l = 1;
  for (const auto& t : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.raw().get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.raw().get_den_mpz_t());
  }
  return Rational::of(g, l);
}

PolyExpr PolyExpr::primitive() const {
  if (terms_.empty()) return *this;
  Rational c = content();
  if (terms_.front().coeff.sign() < 0) c = -c;
  PolyExpr p = *this;
  return p.scale(Rational(1) / c);
}

std::optional<PolyExpr> PolyExpr::divide_exact(const PolyExpr& d) const {
  if (d.is_zero()) throw DomainError("polynomial division by zero");
  if (is_zero()) return PolyExpr();
  if (d.is_constant()) return PolyExpr(*this).scale(Rational(1) / d.terms_[0].coeff);
  const Term& lead = d.terms_.front();
  Rational inv_lead = Rational(1) / lead.coeff;
  // Remainder kept in a sorted map (descending) for repeated leading-term
  // extraction.
  std::map<std::uint64_t, Rational, std::greater<>> rem;
  for (const auto& t : terms_) rem.emplace(t.mono.key(), t.coeff);
  std::vector<Term> quotient;
  while (!rem.empty()) {
    auto it = rem.begin();
    Monomial m = Monomial::from_key(it->first);
    if (!lead.mono.divides(m)) return std::nullopt;
    Monomial qm = lead.mono.quotient_of(m);
    Rational qc = it->second * inv_lead;
    for (const auto& t : d.terms_) {
      Monomial pm = t.mono * qm;
      auto slot = rem.try_emplace(pm.key(), Rational(0)).first;
      slot->second -= qc * t.coeff;
      if (slot->second.is_zero()) rem.erase(slot);
    }
    quotient.push_back({qm, std::move(qc)});
  }
  PolyExpr q;
  q.terms_ = std::move(quotient);  // generated in descending order
  return q;
}

std::vector<std::pair<unsigned, PolyExpr>> PolyExpr::collect(Var v) const {
  std::map<unsigned, std::vector<Term>, std::greater<>> parts;
  for (const auto& t : terms_) parts[t.mono.exponent(v)].push_back({t.mono.without(v), t.coeff});
  std::vector<std::pair<unsigned, PolyExpr>> out;
  for (auto& [e, ts] : parts) out.emplace_back(e, from_terms(std::move(ts)));
  return out;
}

PolyExpr assemble(Var v, const std::vector<std::pair<unsigned, PolyExpr>>& parts) {
  PolyExpr out;
  for (const auto& [e, c] : parts) out += c * PolyExpr::monomial(Rational(1), Monomial::var(v, e));
  return out;
}

PolyExpr PolyExpr::substitute(Var v, const PolyExpr& value) const {
  if (!uses(v)) return *this;
  auto parts = collect(v);
  PolyExpr acc;
  unsigned prev = parts.front().first;
  for (const auto& [e, c] : parts) {
    for (unsigned k = e; k < prev; ++k) acc *= value;
    acc += c;
    prev = e;
  }
  for (unsigned k = 0; k < prev; ++k) acc *= value;
  return acc;
}

PolyExpr PolyExpr::substitute(const Bindings<PolyExpr>& b) const {
  // Simultaneous substitution: route each bound variable through a fresh
  // power table rather than sequential replacement.
  std::array<std::vector<PolyExpr>, kNumVars> powers;
  std::array<unsigned, kNumVars> deg{};
  for (Var v : kAllVars) deg[static_cast<int>(v)] = degree(v);
  for (Var v : kAllVars) {
    int i = static_cast<int>(v);
    if (!b[i]) continue;
    powers[i].push_back(PolyExpr(1));
    for (unsigned k = 1; k <= deg[i]; ++k) powers[i].push_back(powers[i].back() * *b[i]);
  }
  PolyExpr out;
  std::vector<Term> untouched;
  for (const auto& t : terms_) {
    PolyExpr term = PolyExpr::monomial(t.coeff, Monomial());
    std::array<unsigned, kNumVars> keep{};
    for (Var v : kAllVars) {
      int i = static_cast<int>(v);
      unsigned e = t.mono.exponent(v);
      if (e == 0) continue;
      if (b[i]) term *= powers[i][e];
      else keep[i] = e;
    }
    term *= PolyExpr::monomial(Rational(1), Monomial::of(keep[0], keep[1], keep[2], keep[3]));
    out += term;
  }
  return out;
}

PolyExpr PolyExpr::derivative(Var v) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    unsigned e = t.mono.exponent(v);
    if (e == 0) continue;
    std::array<unsigned, kNumVars> ex{};
    for (Var w : kAllVars) ex[static_cast<int>(w)] = t.mono.exponent(w);
    ex[static_cast<int>(v)] = e - 1;
    out.push_back({Monomial::of(ex[0], ex[1], ex[2], ex[3]), t.coeff * Rational(static_cast<long>(e))});
  }
  return from_terms(std::move(out));
}

Rational PolyExpr::eval(const Bindings<Rational>& point) const {
  std::array<std::vector<Rational>, kNumVars> powers;
  for (Var v : kAllVars) {
    int i = static_cast<int>(v);
    unsigned d = degree(v);
    if (d == 0) continue;
    if (!point[i]) throw DomainError("unbound variable " + std::string(var_name(v)));
    powers[i].push_back(Rational(1));
    for (unsigned k = 1; k <= d; ++k) powers[i].push_back(powers[i].back() * *point[i]);
  }
  mpq_class acc = 0, tmp;
  for (const auto& t : terms_) {
    tmp = t.coeff.raw();
    for (Var v : kAllVars) {
      unsigned e = t.mono.exponent(v);
      if (e) tmp *= powers[static_cast<int>(v)][e].raw();
    }
    acc += tmp;
  }
  return Rational(acc);
}

Interval PolyExpr::eval_interval(const Bindings<Interval>& box) const {
  for (Var v : kAllVars)
    if (uses(v) && !box[static_cast<int>(v)])
      throw DomainError("unbound variable " + std::string(var_name(v)));
  std::array<std::vector<Interval>, kNumVars> powers;
  for (Var v : {Var::d1, Var::d2, Var::x}) {
    int i = static_cast<int>(v);
    unsigned d = degree(v);
    if (d == 0) continue;
    powers[i].push_back(Interval(1));
    for (unsigned k = 1; k <= d; ++k) powers[i].push_back(box[i]->pow(static_cast<int>(k)));
  }
  auto coeff_range = [&](const PolyExpr& c) {
    Interval acc(0);
    for (const auto& t : c.terms_) {
      Interval m(t.coeff);
      for (Var v : {Var::d1, Var::d2, Var::x}) {
        unsigned e = t.mono.exponent(v);
        if (e) m *= powers[static_cast<int>(v)][e];
      }
      acc += m;
    }
    return acc;
  };
  if (!uses(Var::n)) return coeff_range(*this);
  const Interval& nv = *box[0];
  auto parts = collect_n();
  Interval acc(0);
  unsigned prev = parts.front().first;
  for (const auto& [e, c] : parts) {
    for (unsigned k = e; k < prev; ++k) acc *= nv;
    acc += coeff_range(c);
    prev = e;
  }
  for (unsigned k = 0; k < prev; ++k) acc *= nv;
  return acc;
}

std::string PolyExpr::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    bool neg = t.coeff.sign() < 0;
    Rational a = t.coeff.abs();
    if (first) {
      if (neg) out += '-';
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    if (t.mono.is_one()) {
      out += a.str();
    } else if (a == Rational(1)) {
      out += t.mono.str();
    } else {
      out += a.str() + "*" + t.mono.str();
    }
  }
  return out;
}

std::string PolyExpr::to_json() const {
  std::vector<std::string> vars{"n", "d1", "d2"};
  bool with_x = uses(Var::x);
  if (with_x) vars.emplace_back("x");
  nlohmann::json j;
  j["vars"] = vars;
  j["terms"] = nlohmann::json::array();
  for (const auto& t : terms_) {
    std::vector<unsigned> e{t.mono.exponent(Var::n), t.mono.exponent(Var::d1), t.mono.exponent(Var::d2)};
    if (with_x) e.push_back(t.mono.exponent(Var::x));
    j["terms"].push_back({{"e", e}, {"c", t.coeff.str()}});
  }
  return j.dump();
}

PolyExpr PolyExpr::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid polynomial json: ") + e.what(), e.byte);
  }
  if (!j.is_object() || !j.contains("vars") || !j.contains("terms"))
    throw ParseError("polynomial json needs \"vars\" and \"terms\"", 0);
  std::vector<Var> order;
  for (const auto& v : j["vars"]) {
    auto var = var_from_name(v.get<std::string>());
    if (!var) throw ParseError("unknown variable " + v.get<std::string>(), 0);
    order.push_back(*var);
  }
  std::vector<Term> terms;
  for (const auto& t : j["terms"]) {
    const auto& e = t.at("e");
    if (e.size() != order.size()) throw ParseError("exponent vector length mismatch", 0);
    std::array<unsigned, kNumVars> ex{};
    for (std::size_t i = 0; i < order.size(); ++i) ex[static_cast<int>(order[i])] += e[i].get<unsigned>();
    const auto& c = t.at("c");
    Rational coeff = c.is_string() ? Rational::parse(c.get<std::string>()) : Rational(c.get<long long>());
    terms.push_back({Monomial::of(ex[0], ex[1], ex[2], ex[3]), coeff});
  }
  return from_terms(std::move(terms));
}

}  // namespace lec
