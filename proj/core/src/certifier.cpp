/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#include "lec/certifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <random>
#include <thread>

#include <json.hpp>

#include "lec/errors.hpp"

namespace lec {

using nlohmann::json;

// ---------------------------------------------------------------- region

Rational LinearConstraint::at(const Point& x) const {
  Rational v = c;
  for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * x[i];
  return v;
}

Interval LinearConstraint::over(const Box& b) const {
  Interval v(c);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero()) v += Interval(a[i]) * b[i];
  return v;
}

void Region::validate() const {
  if (vars.empty() || vars.size() != box.size()) throw DomainError("region: vars and box differ in size");
  if (tau.sign() <= 0) throw DomainError("region: tau must be positive");
  for (const auto& lc : constraints)
    if (lc.a.size() != box.size()) throw DomainError("region: constraint dimension mismatch");
  if (!std::all_of(box.begin(), box.end(), [](const Interval& i) { return i.width().sign() > 0; }))
    throw DomainError("region: degenerate box");
}

bool Region::contains(const Point& x) const {
  for (std::size_t i = 0; i < box.size(); ++i)
    if (!box[i].contains(x[i])) return false;
  for (const auto& lc : constraints) {
    Rational v = lc.at(x);
    if (lc.strict ? v > -tau : v.sign() > 0) return false;
  }
  return true;
}

std::vector<Point> Region::clip2d(const Box& b) const {
  std::vector<Point> poly = {{b[0].lo(), b[1].lo()}, {b[0].hi(), b[1].lo()}, {b[0].hi(), b[1].hi()}, {b[0].lo(), b[1].hi()}};
  for (const auto& lc : constraints) {
    Rational shift = lc.strict ? tau : Rational(0);
    auto g = [&](const Point& p) { return lc.at(p) + shift; };  // keep g <= 0
    std::vector<Point> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point& P = poly[i];
      const Point& Q = poly[(i + 1) % poly.size()];
      Rational gp = g(P), gq = g(Q);
      if (gp.sign() <= 0) out.push_back(P);
      if ((gp.sign() < 0 && gq.sign() > 0) || (gp.sign() > 0 && gq.sign() < 0)) {
        Rational t = gp / (gp - gq);
        out.push_back({P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1])});
      }
    }
    poly = std::move(out);
    if (poly.empty()) break;
  }
  return poly;
}

bool Region::excludes(const Box& b) const {
  for (const auto& lc : constraints) {
    Rational lo = lc.over(b).lo();
    if (lc.strict ? lo > -tau : lo.sign() > 0) return true;
  }
  if (box.size() == 2 && !constraints.empty()) return clip2d(b).empty();
  return false;
}

std::size_t split_axis(const Box& b) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < b.size(); ++i)
    if (b[i].width() > b[best].width()) best = i;
  return best;
}

namespace {

std::pair<Box, Box> bisect(const Box& b, std::size_t axis) {
  Box lo = b, hi = b;
  Rational m = b[axis].mid();
  lo[axis] = Interval(b[axis].lo(), m);
  hi[axis] = Interval(m, b[axis].hi());
  return {lo, hi};
}

Point centre(const Box& b) {
  Point p;
  for (const auto& i : b) p.push_back(i.mid());
  return p;
}

}  // namespace

Box Region::box_at(const std::string& path) const {
  Box b = box;
  for (char ch : path) {
    auto [lo, hi] = bisect(b, split_axis(b));
    b = ch == '0' ? lo : hi;
  }
  return b;
}

std::optional<Point> Region::interior_point() const {
  // Breadth-first over the subdivision; first centre with margin 2 tau.
  std::vector<Box> level = {box};
  for (int depth = 0; depth < 12; ++depth) {
    for (const auto& b : level) {
      Point c = centre(b);
      bool ok = contains(c);
      for (const auto& lc : constraints) ok = ok && lc.at(c) <= -2 * tau;
      if (ok) return c;
    }
    std::vector<Box> next;
    for (const auto& b : level) {
      auto [lo, hi] = bisect(b, split_axis(b));
      next.push_back(lo);
      next.push_back(hi);
    }
    level = std::move(next);
  }
  return std::nullopt;
}

std::vector<std::string> Region::uncovered_strips() const {
  std::vector<std::string> out;
  for (const auto& lc : constraints) {
    if (!lc.strict) continue;
    std::string lin;
    for (std::size_t i = 0; i < lc.a.size(); ++i) {
      if (lc.a[i].is_zero()) continue;
      if (!lin.empty()) lin += " + ";
      lin += "(" + lc.a[i].str() + ")*" + std::string(var_name(vars[i]));
    }
    lin += " + (" + lc.c.str() + ")";
    out.push_back("-" + tau.str() + " < " + lin + " < 0" + (lc.label.empty() ? "" : "  [" + lc.label + "]"));
  }
  return out;
}

namespace {

json box_json(const Box& b) {
  json a = json::array();
  for (const auto& i : b) a.push_back({i.lo().str(), i.hi().str()});
  return a;
}

Box box_from(const json& a) {
  Box b;
  for (const auto& e : a) b.emplace_back(Rational::parse(e[0].get<std::string>()), Rational::parse(e[1].get<std::string>()));
  return b;
}

json point_json(const Point& p) {
  json a = json::array();
  for (const auto& x : p) a.push_back(x.str());
  return a;
}

Point point_from(const json& a) {
  Point p;
  for (const auto& e : a) p.push_back(Rational::parse(e.get<std::string>()));
  return p;
}

json region_json(const Region& r) {
  json v = json::array();
  for (Var x : r.vars) v.push_back(var_name(x));
  json cs = json::array();
  for (const auto& lc : r.constraints) {
    json a = json::array();
    for (const auto& x : lc.a) a.push_back(x.str());
    cs.push_back({{"a", a}, {"c", lc.c.str()}, {"strict", lc.strict}, {"label", lc.label}});
  }
  return {{"vars", v}, {"box", box_json(r.box)}, {"constraints", cs}, {"tau", r.tau.str()}};
}

Region region_from(const json& j) {
  Region r;
  for (const auto& v : j.at("vars")) {
    auto var = var_from_name(v.get<std::string>());
    if (!var) throw ParseError("unknown variable " + v.get<std::string>(), 0);
    r.vars.push_back(*var);
  }
  r.box = box_from(j.at("box"));
  for (const auto& c : j.at("constraints")) {
    LinearConstraint lc;
    for (const auto& a : c.at("a")) lc.a.push_back(Rational::parse(a.get<std::string>()));
    lc.c = Rational::parse(c.at("c").get<std::string>());
    lc.strict = c.at("strict").get<bool>();
    lc.label = c.value("label", "");
    r.constraints.push_back(std::move(lc));
  }
  r.tau = Rational::parse(j.at("tau").get<std::string>());
  return r;
}

}  // namespace

std::string Region::to_json() const { return region_json(*this).dump(); }
Region Region::from_json(const std::string& s) { return region_from(json::parse(s)); }

Region triangle_region(const Rational& top, const Rational& tau) {
  Region r;
  r.vars = {Var::d1, Var::d2};
  r.box = {Interval(Rational(0), top), Interval(Rational(0), top / 2)};
  r.constraints.push_back({{Rational(-1), Rational(1)}, Rational(0), true, "d2 < d1"});
  r.constraints.push_back({{Rational(1), Rational(1)}, -top, true, "d1 + d2 < " + top.str()});
  r.tau = tau;
  r.validate();
  return r;
}

Region box_region(std::vector<Var> vars, Box box, const Rational& tau) {
  Region r;
  r.vars = std::move(vars);
  r.box = std::move(box);
  r.tau = tau;
  r.validate();
  return r;
}

// ---------------------------------------------------------------- names

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::certified: return "CERTIFIED";
    case Verdict::refuted: return "REFUTED";
    default: return "INCONCLUSIVE";
  }
}

Verdict verdict_from_name(const std::string& s) {
  if (s == "CERTIFIED") return Verdict::certified;
  if (s == "REFUTED") return Verdict::refuted;
  if (s == "INCONCLUSIVE") return Verdict::inconclusive;
  throw ParseError("unknown verdict '" + s + "'", 0);
}

const char* leaf_verdict_name(LeafVerdict v) {
  switch (v) {
    case LeafVerdict::certified: return "certified-positive";
    case LeafVerdict::excluded: return "excluded-outside-region";
    case LeafVerdict::counterexample: return "counterexample";
    default: return "depth-exhausted";
  }
}

namespace {

LeafVerdict leaf_verdict_from(const std::string& s) {
  for (auto v : {LeafVerdict::certified, LeafVerdict::excluded, LeafVerdict::counterexample, LeafVerdict::depth_exhausted})
    if (s == leaf_verdict_name(v)) return v;
  throw ParseError("unknown leaf verdict '" + s + "'", 0);
}

}  // namespace

int default_workers() {
  if (const char* w = std::getenv("LEC_WORKERS")) {
    int v = std::atoi(w);
    if (v > 0) return v;
  }
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : static_cast<int>(h);
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Rational round_down_significant(const Rational& x, int bits) {
  if (x.is_zero()) return x;
  // e with 2^e <= |x| < 2^(e+1)
  Rational a = x.abs();
  long e = static_cast<long>(mpz_sizeinbase(a.num().get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(a.den().get_mpz_t(), 2));
  while (Rational::pow2(e) > a) --e;
  while (Rational::pow2(e + 1) <= a) ++e;
  return x.floor_dyadic(bits - 1 - e);
}

// ---------------------------------------------------------------- engine

namespace {

struct Node {
  std::string path;
  Box box;
  std::any state;
};

struct Outcome {
  std::vector<Leaf> leaves;
  CheckStats stats;
};

std::optional<std::pair<Point, Rational>> find_negative(const BoxFunction& f, const Region& region, const Box& b) {
  std::vector<Point> candidates = {centre(b)};
  std::size_t d = b.size();
  if (d <= 4)
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      Point p;
      for (std::size_t i = 0; i < d; ++i) p.push_back(mask & (1u << i) ? b[i].hi() : b[i].lo());
      candidates.push_back(std::move(p));
    }
  for (const auto& p : candidates) {
    if (!region.contains(p)) continue;
    try {
      Interval v = f.at_point(p);
      if (v.negative()) return std::make_pair(p, round_down_significant(v.hi(), 64));
    } catch (const DomainError&) {
    }
  }
  return std::nullopt;
}

/// Processes one node: either emits a leaf or returns its two children.
bool step(const Check& chk, const Region& region, const EngineOptions& o, Node& node, std::size_t check_index,
          Outcome& out, std::vector<Node>& children, bool budget_left) {
  auto& st = out.stats;
  ++st.boxes;
  int depth = static_cast<int>(node.path.size());
  st.max_depth = std::max(st.max_depth, depth);
  Leaf leaf;
  leaf.check = check_index;
  leaf.path = node.path;
  leaf.box = node.box;
  if (region.excludes(node.box)) {
    leaf.verdict = LeafVerdict::excluded;
    ++st.excluded;
    out.leaves.push_back(std::move(leaf));
    return false;
  }
  std::optional<Interval> e;
  try {
    e = chk.f->enclose(node.state, node.box, region);
  } catch (const DomainError&) {
  }
  if (e && (chk.strict ? e->lo().sign() > 0 : e->lo().sign() >= 0)) {
    leaf.verdict = LeafVerdict::certified;
    leaf.bound = round_down_significant(e->lo(), 64);
    ++st.certified;
    out.leaves.push_back(std::move(leaf));
    return false;
  }
  if (e && e->negative()) {
    if (auto cx = find_negative(*chk.f, region, node.box)) {
      leaf.verdict = LeafVerdict::counterexample;
      leaf.point = cx->first;
      leaf.bound = cx->second;
      ++st.counterexamples;
      out.leaves.push_back(std::move(leaf));
      return false;
    }
  }
  if (depth >= o.depth_cap || !budget_left) {
    Point c = centre(node.box);
    leaf.verdict = LeafVerdict::depth_exhausted;
    if (region.contains(c)) {
      try {
        Interval v = chk.f->at_point(c);
        if (v.negative()) {
          leaf.verdict = LeafVerdict::counterexample;
          leaf.point = c;
          leaf.bound = round_down_significant(v.hi(), 64);
        }
      } catch (const DomainError&) {
      }
    }
    if (leaf.verdict == LeafVerdict::counterexample) ++st.counterexamples;
    else ++st.exhausted;
    out.leaves.push_back(std::move(leaf));
    return false;
  }
  std::size_t axis = split_axis(node.box);
  auto [blo, bhi] = bisect(node.box, axis);
  auto [slo, shi] = chk.f->split(node.state, node.box, axis);
  children.push_back({node.path + "1", std::move(bhi), std::move(shi)});
  children.push_back({node.path + "0", std::move(blo), std::move(slo)});
  return true;
}

Outcome run_subtree(const Check& chk, const Region& region, const EngineOptions& o, Node root, std::size_t ci) {
  Outcome out;
  std::vector<Node> stack;
  stack.push_back(std::move(root));
  std::uint64_t processed = 0;
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    std::vector<Node> kids;
    step(chk, region, o, node, ci, out, kids, processed < o.max_boxes);
    ++processed;
    for (auto& k : kids) stack.push_back(std::move(k));  // "1" then "0": "0" pops first
  }
  return out;
}

template <class F>
void parallel_for(std::size_t count, int workers, F&& body) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  for (int w = 0; w < workers && static_cast<std::size_t>(w) < count; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> g(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

Verdict check_verdict(const CheckStats& s) {
  if (s.counterexamples > 0) return Verdict::refuted;
  if (s.exhausted > 0) return Verdict::inconclusive;
  return Verdict::certified;
}

void evaluate_conditions(const Problem& pb, Certificate& cert) {
  cert.condition_results.clear();
  for (const auto& cond : pb.conditions) {
    ConditionResult cr;
    bool all = true;
    for (auto ci : cond.checks) all = all && cert.check_results[ci].verdict == Verdict::certified;
    if (all && cond.sign > 0) {
      cr.verdict = Verdict::certified;
    } else {
      std::vector<Point> pts;
      for (const auto& leaf : cert.leaves)
        if (leaf.verdict == LeafVerdict::counterexample &&
            std::find(cond.checks.begin(), cond.checks.end(), leaf.check) != cond.checks.end() &&
            leaf.point.size() == pb.region.vars.size() && pb.region.contains(leaf.point))
          pts.push_back(leaf.point);
      if (all && cond.sign < 0)
        if (auto ip = pb.region.interior_point()) pts.push_back(*ip);
      for (const auto& p : pts) {
        if (!cond.exact) break;
        try {
          Interval v = cond.exact(p);
          bool fails = v.negative() || (cond.strict && v.is_point() && v.hi().is_zero());
          if (fails) {
            cr.verdict = Verdict::refuted;
            cr.witness = p;
            break;
          }
        } catch (const DomainError&) {
        }
      }
    }
    cert.condition_results.push_back(std::move(cr));
  }
  cert.verdict = Verdict::certified;
  for (const auto& cr : cert.condition_results) {
    if (cr.verdict == Verdict::refuted) {
      cert.verdict = Verdict::refuted;
      break;
    }
    if (cr.verdict == Verdict::inconclusive) cert.verdict = Verdict::inconclusive;
  }
  if (pb.conditions.empty()) {
    for (const auto& r : cert.check_results) {
      if (r.verdict == Verdict::refuted) {
        cert.verdict = Verdict::refuted;
        break;
      }
      if (r.verdict == Verdict::inconclusive) cert.verdict = Verdict::inconclusive;
    }
  }
}

std::string canonical(const std::string& inputs_json) { return json::parse(inputs_json).dump(); }

}  // namespace

Certificate run_problem(const Problem& pb) {
  auto t0 = std::chrono::steady_clock::now();
  pb.region.validate();
  const EngineOptions& o = pb.options;
  Certificate cert;
  cert.kind = pb.kind;
  cert.inputs_json = canonical(pb.inputs_json);
  cert.input_hash = fnv1a_hex(cert.inputs_json);
  cert.uncovered = pb.region.uncovered_strips();
  // Frontier: expand each check's root to a fixed depth in DFS order.
  struct Task {
    std::size_t check;
    Node node;
  };
  std::vector<Task> tasks;
  std::vector<Outcome> front(pb.checks.size());
  for (std::size_t ci = 0; ci < pb.checks.size(); ++ci) {
    const Check& chk = pb.checks[ci];
    cert.check_names.push_back(chk.name);
    cert.check_descriptions.push_back(chk.f->description());
    cert.check_strict.push_back(chk.strict);
    std::vector<Node> stack;
    stack.push_back({"", pb.region.box, chk.f->root(pb.region.box)});
    while (!stack.empty()) {
      Node node = std::move(stack.back());
      stack.pop_back();
      if (static_cast<int>(node.path.size()) >= std::min(o.frontier_depth, o.depth_cap)) {
        tasks.push_back({ci, std::move(node)});
        continue;
      }
      std::vector<Node> kids;
      step(chk, pb.region, o, node, ci, front[ci], kids, true);
      for (auto& k : kids) stack.push_back(std::move(k));
    }
  }
  std::vector<Outcome> results(tasks.size());
  int workers = o.workers > 0 ? o.workers : default_workers();
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    results[i] = run_subtree(pb.checks[tasks[i].check], pb.region, o, tasks[i].node, tasks[i].check);
  });
  cert.check_results.assign(pb.checks.size(), {});
  auto absorb = [&](const Outcome& oc, std::size_t ci) {
    auto& s = cert.check_results[ci].stats;
    s.boxes += oc.stats.boxes;
    s.max_depth = std::max(s.max_depth, oc.stats.max_depth);
    s.certified += oc.stats.certified;
    s.excluded += oc.stats.excluded;
    s.counterexamples += oc.stats.counterexamples;
    s.exhausted += oc.stats.exhausted;
    cert.leaves.insert(cert.leaves.end(), oc.leaves.begin(), oc.leaves.end());
  };
  for (std::size_t ci = 0; ci < pb.checks.size(); ++ci) absorb(front[ci], ci);
  for (std::size_t i = 0; i < tasks.size(); ++i) absorb(results[i], tasks[i].check);
  std::sort(cert.leaves.begin(), cert.leaves.end(), [](const Leaf& a, const Leaf& b) {
    return a.check != b.check ? a.check < b.check : a.path < b.path;
  });
  for (auto& r : cert.check_results) r.verdict = check_verdict(r.stats);
  for (const auto& c : pb.conditions) {
    cert.condition_names.push_back(c.name);
    cert.condition_via.push_back(c.via);
  }
  evaluate_conditions(pb, cert);
  cert.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return cert;
}

std::string Certificate::to_json() const {
  json j;
  j["schema"] = "lec/1";
  j["kind"] = kind;
  j["inputs"] = json::parse(inputs_json);
  j["input_hash"] = input_hash;
  json ineqs = json::array();
  std::uint64_t boxes = 0;
  int depth = 0;
  for (std::size_t i = 0; i < check_names.size(); ++i) {
    const auto& s = check_results[i].stats;
    boxes += s.boxes;
    depth = std::max(depth, s.max_depth);
    ineqs.push_back({{"id", i},
                     {"name", check_names[i]},
                     {"expr", check_descriptions[i]},
                     {"relation", check_strict[i] ? "> 0" : ">= 0"},
                     {"verdict", verdict_name(check_results[i].verdict)},
                     {"stats",
                      {{"boxes", s.boxes},
                       {"max_depth", s.max_depth},
                       {"certified", s.certified},
                       {"excluded", s.excluded},
                       {"counterexamples", s.counterexamples},
                       {"exhausted", s.exhausted}}}});
  }
  j["inequalities"] = ineqs;
  json conds = json::array();
  for (std::size_t i = 0; i < condition_names.size(); ++i) {
    json c = {{"name", condition_names[i]}, {"via", condition_via[i]}, {"verdict", verdict_name(condition_results[i].verdict)}};
    if (!condition_results[i].witness.empty()) c["witness"] = point_json(condition_results[i].witness);
    conds.push_back(c);
  }
  j["conditions"] = conds;
  json tree = json::array();
  for (const auto& l : leaves) {
    json e = {{"ineq", l.check}, {"path", l.path}, {"box", box_json(l.box)}, {"verdict", leaf_verdict_name(l.verdict)}};
    if (l.bound) e["value_bound"] = l.bound->str();
    if (!l.point.empty()) e["point"] = point_json(l.point);
    tree.push_back(std::move(e));
  }
  j["tree"] = std::move(tree);
  j["verdict"] = verdict_name(verdict);
  j["stats"] = {{"boxes", boxes}, {"leaves", leaves.size()}, {"max_depth", depth}};
  j["uncovered"] = uncovered;
  return j.dump(1);
}

// ---------------------------------------------------------------- factor route

std::size_t add_ratfunc_condition(Problem& pb, const std::string& name, const RatFunc& f,
                                  std::function<Interval(const Point&)> exact, bool strict) {
  RatFunc g = f.normalized();
  if (g.is_zero()) throw DomainError("condition " + name + " is identically zero");
  auto ip = pb.region.interior_point();
  if (!ip) throw DomainError("region has no interior point");
  Bindings<Rational> at;
  for (std::size_t i = 0; i < pb.region.vars.size(); ++i) at[static_cast<int>(pb.region.vars[i])] = (*ip)[i];
  Condition cond;
  cond.name = name;
  cond.strict = strict;
  cond.exact = std::move(exact);
  int sign = g.scale().sign();
  std::string via;
  for (const auto& [poly, e] : g.factors()) {
    for (Var v : kAllVars)
      if (poly.uses(v) && std::find(pb.region.vars.begin(), pb.region.vars.end(), v) == pb.region.vars.end())
        throw DomainError("condition " + name + " uses a variable outside the region");
    int orient = poly.eval(at).sign() < 0 ? -1 : 1;
    PolyExpr oriented = orient < 0 ? -poly : poly;
    bool fs = strict || e < 0;
    std::string key = oriented.str() + (fs ? " > 0" : " >= 0");
    std::size_t idx;
    auto it = pb.factor_checks.find(key);
    if (it != pb.factor_checks.end()) {
      idx = it->second;
    } else {
      idx = pb.checks.size();
      pb.checks.push_back({name + ":f" + std::to_string(cond.checks.size()), poly_function(oriented, pb.region.vars), fs});
      pb.factor_checks.emplace(key, idx);
    }
    cond.checks.push_back(idx);
    if (orient < 0 && e % 2 != 0) sign = -sign;
    if (!via.empty()) via += ", ";
    via += "#" + std::to_string(idx) + "^" + std::to_string(e);
  }
  cond.sign = sign;
  cond.via = "sign " + std::string(sign > 0 ? "+" : "-") + (via.empty() ? "" : " with factors " + via);
  pb.conditions.push_back(std::move(cond));
  return pb.conditions.size() - 1;
}

namespace {

std::function<Interval(const Point&)> ratfunc_exact(const RatFunc& f, const std::vector<Var>& vars) {
  return [f, vars](const Point& p) {
    Bindings<Rational> b;
    for (std::size_t i = 0; i < vars.size(); ++i) b[static_cast<int>(vars[i])] = p[i];
    return Interval(f.eval_exact(b));
  };
}

json engine_json(const EngineOptions& o) {
  return {{"depth_cap", o.depth_cap}, {"frontier_depth", o.frontier_depth}, {"max_boxes", o.max_boxes}};
}

EngineOptions engine_from(const json& j) {
  EngineOptions o;
  o.depth_cap = j.at("depth_cap").get<int>();
  o.frontier_depth = j.at("frontier_depth").get<int>();
  o.max_boxes = j.at("max_boxes").get<std::uint64_t>();
  return o;
}

Problem positive_ratfunc_problem(const RatFunc& f, const Region& region, const EngineOptions& opts) {
  Problem pb;
  pb.kind = "positive";
  pb.region = region;
  pb.options = opts;
  pb.inputs_json = json{{"f", f.str()}, {"region", region_json(region)}, {"engine", engine_json(opts)}}.dump();
  add_ratfunc_condition(pb, "f", f, ratfunc_exact(f, region.vars));
  return pb;
}

Problem poly_bound_problem(const PolyExpr& f, const PolyExpr& g, const Region& region, const EngineOptions& opts) {
  Problem pb;
  pb.kind = "poly_bound";
  pb.region = region;
  pb.options = opts;
  pb.inputs_json = json{{"f", json::parse(f.to_json())}, {"g", json::parse(g.to_json())}, {"region", region_json(region)},
                        {"engine", engine_json(opts)}}
                       .dump();
  PolyExpr h = f - g;
  pb.checks.push_back({"f - g", poly_function(h, region.vars), false});
  Condition c;
  c.name = "f - g >= 0";
  c.via = "#0";
  c.checks = {0};
  c.strict = false;
  c.exact = ratfunc_exact(RatFunc(h), region.vars);
  pb.conditions.push_back(std::move(c));
  return pb;
}

std::map<std::string, std::function<Problem(const std::string&)>>& registry() {
  static std::map<std::string, std::function<Problem(const std::string&)>> r;
  return r;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

Problem rebuild(const std::string& kind, const std::string& inputs) {
  json in = json::parse(inputs);
  if (kind == "positive")
    return positive_ratfunc_problem(RatFunc::parse(in.at("f").get<std::string>()), region_from(in.at("region")),
                                    engine_from(in.at("engine")));
  if (kind == "poly_bound")
    return poly_bound_problem(PolyExpr::from_json(in.at("f").dump()), PolyExpr::from_json(in.at("g").dump()),
                              region_from(in.at("region")), engine_from(in.at("engine")));
  if (kind == "conditions") {
    ConditionsOptions co;
    co.c0 = Rational::parse(in.at("c0").get<std::string>());
    co.tau = Rational::parse(in.at("tau").get<std::string>());
    co.engine = engine_from(in.at("engine"));
    long n = in.at("n").get<long>();
    if (in.at("scheme").get<std::string>() == "I") return conditions_problem_scheme1(n, co);
    return conditions_problem_scheme2(n, Rational::parse(in.at("eps0").get<std::string>()), co,
                                      in.value("eps0_zero_stage", true));
  }
  std::function<Problem(const std::string&)> b;
  {
    std::lock_guard<std::mutex> g(registry_mutex());
    auto it = registry().find(kind);
    if (it == registry().end()) throw DomainError("replay: unknown certificate kind '" + kind + "'");
    b = it->second;
  }
  return b(inputs);
}

}  // namespace

void register_problem_kind(const std::string& kind, std::function<Problem(const std::string&)> build) {
  std::lock_guard<std::mutex> g(registry_mutex());
  registry()[kind] = std::move(build);
}

Certificate certify_positive(std::shared_ptr<BoxFunction> f, const Region& region, const EngineOptions& opts) {
  Problem pb;
  pb.kind = "positive-opaque";
  pb.region = region;
  pb.options = opts;
  pb.inputs_json = json{{"f", f->description()}, {"region", region_json(region)}, {"engine", engine_json(opts)}}.dump();
  pb.checks.push_back({"f", f, true});
  return run_problem(pb);
}

Certificate certify_positive(const RatFunc& f, const Region& region, const EngineOptions& opts) {
  return run_problem(positive_ratfunc_problem(f, region, opts));
}

Certificate certify_poly_bound(const PolyExpr& f, const PolyExpr& g, const Region& region, const EngineOptions& opts) {
  return run_problem(poly_bound_problem(f, g, region, opts));
}

// ---------------------------------------------------------------- replay

ReplayReport replay(const std::string& certificate_json, int workers) {
  ReplayReport rep;
  json c = json::parse(certificate_json);
  std::string inputs = c.at("inputs").dump();
  rep.hash_ok = fnv1a_hex(inputs) == c.at("input_hash").get<std::string>();
  if (!rep.hash_ok) rep.problems.push_back("input hash mismatch");
  Problem pb = rebuild(c.at("kind").get<std::string>(), inputs);
  const auto& ineqs = c.at("inequalities");
  rep.structure_ok = ineqs.size() == pb.checks.size();
  for (std::size_t i = 0; rep.structure_ok && i < pb.checks.size(); ++i)
    if (ineqs[i].at("expr").get<std::string>() != pb.checks[i].f->description() ||
        ineqs[i].at("name").get<std::string>() != pb.checks[i].name) {
      rep.structure_ok = false;
      rep.problems.push_back("inequality " + std::to_string(i) + " differs from the rebuilt problem");
    }
  if (!rep.structure_ok) {
    if (rep.problems.empty()) rep.problems.push_back("inequality count differs");
    return rep;
  }
  std::vector<Leaf> leaves;
  for (const auto& e : c.at("tree")) {
    Leaf l;
    l.check = e.at("ineq").get<std::size_t>();
    l.path = e.at("path").get<std::string>();
    l.box = box_from(e.at("box"));
    l.verdict = leaf_verdict_from(e.at("verdict").get<std::string>());
    if (e.contains("value_bound")) l.bound = Rational::parse(e.at("value_bound").get<std::string>());
    if (e.contains("point")) l.point = point_from(e.at("point"));
    if (l.check >= pb.checks.size()) {
      rep.structure_ok = false;
      rep.problems.push_back("leaf refers to unknown inequality");
      return rep;
    }
    leaves.push_back(std::move(l));
  }
  // Each check's leaves must tile the root: prefix-free, Kraft sum 1.
  std::vector<Rational> kraft(pb.checks.size(), Rational(0));
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    kraft[leaves[i].check] += Rational::pow2(-static_cast<long>(leaves[i].path.size()));
    if (i > 0 && leaves[i - 1].check == leaves[i].check) {
      const auto& a = leaves[i - 1].path;
      const auto& b = leaves[i].path;
      if (!(a < b) || b.compare(0, a.size(), a) == 0) {
        rep.structure_ok = false;
        rep.problems.push_back("leaves out of canonical order at " + b);
      }
    }
  }
  for (std::size_t i = 0; i < kraft.size(); ++i)
    if (kraft[i] != Rational(1)) {
      rep.structure_ok = false;
      rep.problems.push_back("leaves of inequality " + std::to_string(i) + " do not tile the region box");
    }
  std::vector<char> bad(leaves.size(), 0);
  parallel_for(leaves.size(), workers > 0 ? workers : default_workers(), [&](std::size_t i) {
    const Leaf& l = leaves[i];
    const Check& chk = pb.checks[l.check];
    bool ok = pb.region.box_at(l.path) == l.box;
    if (ok) switch (l.verdict) {
        case LeafVerdict::excluded:
          ok = pb.region.excludes(l.box);
          break;
        case LeafVerdict::certified: {
          try {
            Interval e = chk.f->enclose(chk.f->root(l.box), l.box, pb.region);
            ok = l.bound && e.lo() >= *l.bound && (chk.strict ? e.lo().sign() > 0 : e.lo().sign() >= 0);
          } catch (const DomainError&) {
            ok = false;
          }
          break;
        }
        case LeafVerdict::counterexample: {
          bool inside = l.point.size() == l.box.size();
          for (std::size_t k = 0; inside && k < l.box.size(); ++k) inside = l.box[k].contains(l.point[k]);
          try {
            ok = inside && pb.region.contains(l.point) && chk.f->at_point(l.point).negative();
          } catch (const DomainError&) {
            ok = false;
          }
          break;
        }
        case LeafVerdict::depth_exhausted:
          ok = true;
          break;
      }
    bad[i] = ok ? 0 : 1;
  });
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    ++rep.leaves_checked;
    if (bad[i]) {
      ++rep.mismatches;
      if (rep.problems.size() < 20)
      {
        std::string b;
        for (const auto& iv : leaves[i].box) b += (b.empty() ? "" : " x ") + std::string("[") + iv.lo().str() + ", " + iv.hi().str() + "]";
        rep.problems.push_back("leaf " + std::to_string(leaves[i].check) + ":" + leaves[i].path + " box " + b +
                               " does not replay");
      }
    }
  }
  // Recompute the verdict from the replayed leaves.
  Certificate cert;
  cert.leaves = leaves;
  // a leaf that does not replay proves nothing
  for (std::size_t i = 0; i < leaves.size(); ++i)
    if (bad[i]) cert.leaves[i].verdict = LeafVerdict::depth_exhausted;
  cert.check_results.assign(pb.checks.size(), {});
  for (const auto& l : cert.leaves) {
    auto& s = cert.check_results[l.check].stats;
    if (l.verdict == LeafVerdict::counterexample) ++s.counterexamples;
    if (l.verdict == LeafVerdict::depth_exhausted) ++s.exhausted;
  }
  for (auto& r : cert.check_results) r.verdict = check_verdict(r.stats);
  evaluate_conditions(pb, cert);
  rep.verdict = cert.verdict;
  if (verdict_name(rep.verdict) != c.at("verdict").get<std::string>()) {
    ++rep.mismatches;
    rep.problems.push_back("recorded verdict differs from replayed verdict");
  }
  return rep;
}

// ---------------------------------------------------------------- sampling

std::uint64_t soundness_sample(const Problem& pb, std::uint64_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Region& r = pb.region;
  std::uniform_int_distribution<std::uint64_t> u(0, (1ull << 30) - 1);
  std::uint64_t violations = 0, taken = 0, tries = 0;
  while (taken < samples && tries < samples * 1000) {
    ++tries;
    Point p;
    for (const auto& iv : r.box) p.push_back(iv.lo() + iv.width() * Rational::of(static_cast<long long>(u(rng)), 1ll << 30));
    if (!r.contains(p)) continue;
    ++taken;
    for (const auto& cond : pb.conditions) {
      if (!cond.exact) continue;
      try {
        Interval v = cond.exact(p);
        if (cond.strict ? !v.positive() : v.negative()) ++violations;
      } catch (const DomainError&) {
        ++violations;
      }
    }
  }
  if (taken < samples) ++violations;
  return violations;
}

}  // namespace lec
