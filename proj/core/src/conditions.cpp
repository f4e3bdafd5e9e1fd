/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#include <optional>

#include <json.hpp>

#include "lec/certifier.hpp"
#include "lec/errors.hpp"

namespace lec {

using nlohmann::json;

namespace {

json engine_json(const EngineOptions& o) {
  return {{"depth_cap", o.depth_cap}, {"frontier_depth", o.frontier_depth}, {"max_boxes", o.max_boxes}};
}

Rational region_top(long n, const Rational& c0) {
  if (n < 3) throw DomainError("n must be at least 3");
  if (c0 <= 2) throw DomainError("c0 must exceed 2");
  Rational top = 2 - c0 / Rational(n);
  if (top.sign() <= 0) throw DomainError("empty region: 2 - c0/n <= 0");
  return top;
}

using Exact = std::function<Interval(const Point&)>;

// Conditions at one point are evaluated back to back (sampling, witness
// checks), so the last coefficient set per thread is kept.
const Coefficients<Rational>& scheme1_at(long n, const Point& x) {
  thread_local long cn = -1;
  thread_local Point cx;
  thread_local std::optional<Coefficients<Rational>> c;
  if (!c || cn != n || cx != x) {
    c.reset();
    c = scheme1(n, x[0], x[1]);
    cn = n;
    cx = x;
  }
  return *c;
}

const Coefficients<Interval>& scheme2_at(long n, const Rational& eps0, const Point& x, long bits) {
  thread_local long cn = -1, cb = -1;
  thread_local Rational ce;
  thread_local Point cx;
  thread_local std::optional<Coefficients<Interval>> c;
  if (!c || cn != n || cb != bits || ce != eps0 || cx != x) {
    c.reset();
    c = scheme2(n, x[0], x[1], eps0, Rational::pow2(-bits));
    cn = n;
    cb = bits;
    ce = eps0;
    cx = x;
  }
  return *c;
}

Exact exact1(long n, Rational (*field)(const Coefficients<Rational>&)) {
  return [n, field](const Point& x) { return Interval(field(scheme1_at(n, x))); };
}

Exact exact2(long n, const Rational& eps0, Interval (*field)(const Coefficients<Interval>&)) {
  return [n, eps0, field](const Point& x) {
    Interval v;
    for (long bits : {64L, 128L, 256L, 512L}) {
      v = field(scheme2_at(n, eps0, x, bits));
      if (!v.contains_zero()) break;
    }
    return v;
  };
}

template <class T>
T product_condition(const Coefficients<T>& c) {
  return c.beta1 * c.beta2 - c.gamma1 * c.gamma2;
}

void require_identity(const RatFunc& a, const RatFunc& b, const char* what, long n) {
  if (!(a - b).is_zero())
    throw ConsistencyError(std::string("identity check failed for ") + what + " at n = " + std::to_string(n));
}

}  // namespace

Problem conditions_problem_scheme1(long n, const ConditionsOptions& opts) {
  Rational top = region_top(n, opts.c0);
  Problem pb;
  pb.kind = "conditions";
  pb.region = triangle_region(top, opts.tau);
  pb.options = opts.engine;
  pb.inputs_json = json{{"scheme", "I"},        {"n", n},
                        {"c0", opts.c0.str()},  {"tau", opts.tau.str()},
                        {"engine", engine_json(opts.engine)}}
                       .dump();
  const RatFunc N{Rational(n)};
  auto c = scheme1_generic<RatFunc>(N, RatFunc::var(Var::d1), RatFunc::var(Var::d2));
  auto f1 = scheme1_closed(N, c.r, c.p, c.mu_r);
  auto f2 = scheme1_closed(N, c.s, c.q, c.mu_s);
  // The certified quantities are the closed forms; tie them to the
  // defining formulas at this n before using them.
  require_identity(c.delta1, f1.delta, "delta1", n);
  require_identity(c.delta2, f2.delta, "delta2", n);
  require_identity(c.A1, f1.A, "A1", n);
  require_identity(c.A2, f2.A, "A2", n);
  require_identity(c.alpha1, f1.alpha, "alpha1", n);
  require_identity(c.alpha2, f2.alpha, "alpha2", n);
  require_identity(N * c.L1 / (N - RatFunc(1)), c.mu_r, "L1", n);
  require_identity(N * c.L2 / (N - RatFunc(1)), c.mu_s, "L2", n);
  RatFunc F = f1.A * f2.A - c.p * c.q;

  add_ratfunc_condition(pb, "p", c.p, exact1(n, [](const Coefficients<Rational>& k) { return k.p; }));
  add_ratfunc_condition(pb, "q", c.q, exact1(n, [](const Coefficients<Rational>& k) { return k.q; }));
  add_ratfunc_condition(pb, "mu_r", c.mu_r, exact1(n, [](const Coefficients<Rational>& k) { return k.mu_r; }));
  add_ratfunc_condition(pb, "mu_s", c.mu_s, exact1(n, [](const Coefficients<Rational>& k) { return k.mu_s; }));
  add_ratfunc_condition(pb, "delta1", f1.delta, exact1(n, [](const Coefficients<Rational>& k) { return k.delta1; }));
  add_ratfunc_condition(pb, "delta2", f2.delta, exact1(n, [](const Coefficients<Rational>& k) { return k.delta2; }));
  add_ratfunc_condition(pb, "A1", f1.A, exact1(n, [](const Coefficients<Rational>& k) { return k.A1; }));
  add_ratfunc_condition(pb, "A2", f2.A, exact1(n, [](const Coefficients<Rational>& k) { return k.A2; }));
  add_ratfunc_condition(pb, "A1*A2 - p*q", F,
                        exact1(n, [](const Coefficients<Rational>& k) { return k.A1 * k.A2 - k.p * k.q; }));
  // The seven conditions. gamma = (n-1)/n mu p / delta, beta = gamma A / p,
  // beta1 beta2 - gamma1 gamma2 = gamma1 gamma2 (A1 A2 - p q) / (p q).
  add_ratfunc_condition(pb, "alpha1", f1.alpha, exact1(n, [](const Coefficients<Rational>& k) { return k.alpha1; }));
  add_ratfunc_condition(pb, "alpha2", f2.alpha, exact1(n, [](const Coefficients<Rational>& k) { return k.alpha2; }));
  add_ratfunc_condition(pb, "beta1", c.mu_r * f1.A / f1.delta,
                        exact1(n, [](const Coefficients<Rational>& k) { return k.beta1; }));
  add_ratfunc_condition(pb, "beta2", c.mu_s * f2.A / f2.delta,
                        exact1(n, [](const Coefficients<Rational>& k) { return k.beta2; }));
  add_ratfunc_condition(pb, "gamma1", c.mu_r * c.p / f1.delta,
                        exact1(n, [](const Coefficients<Rational>& k) { return k.gamma1; }));
  add_ratfunc_condition(pb, "gamma2", c.mu_s * c.q / f2.delta,
                        exact1(n, [](const Coefficients<Rational>& k) { return k.gamma2; }));
  add_ratfunc_condition(pb, "beta1*beta2 - gamma1*gamma2", c.mu_r * c.mu_s * F / (f1.delta * f2.delta),
                        exact1(n, [](const Coefficients<Rational>& k) { return product_condition(k); }));
  return pb;
}

namespace {

void add_surd_group(Problem& pb, long n, const Rational& e, const std::vector<std::size_t>& pq_checks) {
  std::string prefix = "eps0=" + e.str() + ":";
  auto add = [&](SurdQuantity q) {
    pb.checks.push_back({prefix + surd_quantity_name(q), surd_function(n, e, q), true});
    return pb.checks.size() - 1;
  };
  std::size_t rho1 = add(SurdQuantity::rho1), rho2 = add(SurdQuantity::rho2);
  std::size_t d1 = add(SurdQuantity::delta1), d2 = add(SurdQuantity::delta2);
  std::size_t a1 = add(SurdQuantity::A1), a2 = add(SurdQuantity::A2);
  std::size_t prod = add(SurdQuantity::product);
  auto cond = [&](const std::string& name, const std::string& via, std::vector<std::size_t> checks,
                  Interval (*field)(const Coefficients<Interval>&)) {
    Condition c;
    c.name = prefix + name;
    c.via = via;
    c.checks = std::move(checks);
    c.exact = exact2(n, e, field);
    pb.conditions.push_back(std::move(c));
  };
  auto with_pq = [&](std::vector<std::size_t> v) {
    v.insert(v.end(), pq_checks.begin(), pq_checks.end());
    return v;
  };
  cond("gamma1", "rho1 > 0, delta1 > 0, p > 0", with_pq({rho1, d1}), [](const Coefficients<Interval>& k) { return k.gamma1; });
  cond("gamma2", "rho2 > 0, delta2 > 0, q > 0", with_pq({rho2, d2}), [](const Coefficients<Interval>& k) { return k.gamma2; });
  cond("beta1", "gamma1 > 0, A1 > 0", with_pq({rho1, d1, a1}), [](const Coefficients<Interval>& k) { return k.beta1; });
  cond("beta2", "gamma2 > 0, A2 > 0", with_pq({rho2, d2, a2}), [](const Coefficients<Interval>& k) { return k.beta2; });
  cond("beta1*beta2 - gamma1*gamma2", "gamma1, gamma2 > 0, A1*A2 - p*q > 0", with_pq({rho1, rho2, d1, d2, prod}),
       [](const Coefficients<Interval>& k) { return product_condition(k); });
  if (e.sign() > 0) {
    std::size_t al1 = add(SurdQuantity::alpha1), al2 = add(SurdQuantity::alpha2);
    cond("alpha1", "direct", {al1}, [](const Coefficients<Interval>& k) { return k.alpha1; });
    cond("alpha2", "direct", {al2}, [](const Coefficients<Interval>& k) { return k.alpha2; });
  }
}

Problem scheme2_problem(long n, const Rational& eps0, const ConditionsOptions& opts, bool include_zero) {
  Rational top = region_top(n, opts.c0);
  Problem pb;
  pb.kind = "conditions";
  pb.region = triangle_region(top, opts.tau);
  pb.options = opts.engine;
  pb.inputs_json = json{{"scheme", "II"},         {"n", n},
                        {"c0", opts.c0.str()},    {"tau", opts.tau.str()},
                        {"eps0", eps0.str()},     {"engine", engine_json(opts.engine)},
                        {"eps0_zero_stage", include_zero}}
                       .dump();
  const RatFunc N{Rational(n)};
  auto sh = shifts<RatFunc>(N, RatFunc::var(Var::d1), RatFunc::var(Var::d2));
  auto rat = [](RatFunc f) {
    return [f](const Point& x) {
      Bindings<Rational> b;
      b[static_cast<std::size_t>(Var::d1)] = x[0];
      b[static_cast<std::size_t>(Var::d2)] = x[1];
      return Interval(f.eval_exact(b));
    };
  };
  // Range of r and s assumed by the surd choice; certified, not assumed.
  RatFunc r_lo = sh.r + N / (N - RatFunc(2)), r_hi = -sh.r, s_lo = sh.s, s_hi = RatFunc(1) - sh.s;
  add_ratfunc_condition(pb, "r > -n/(n-2)", r_lo, rat(r_lo));
  add_ratfunc_condition(pb, "r < 0", r_hi, rat(r_hi));
  add_ratfunc_condition(pb, "s > 0", s_lo, rat(s_lo));
  add_ratfunc_condition(pb, "s < 1", s_hi, rat(s_hi));
  std::size_t pc = add_ratfunc_condition(pb, "p", sh.p, rat(sh.p));
  std::size_t qc = add_ratfunc_condition(pb, "q", sh.q, rat(sh.q));
  std::vector<std::size_t> pq = pb.conditions[pc].checks;
  pq.insert(pq.end(), pb.conditions[qc].checks.begin(), pb.conditions[qc].checks.end());
  if (include_zero) add_surd_group(pb, n, Rational(0), pq);
  if (eps0.sign() > 0) add_surd_group(pb, n, eps0, pq);
  return pb;
}

}  // namespace

Problem conditions_problem_scheme2(long n, const Rational& eps0, const ConditionsOptions& opts, bool zero_stage) {
  return scheme2_problem(n, eps0, opts, zero_stage);
}

Certificate certify_conditions(long n, Scheme scheme, const ConditionsOptions& opts) {
  if (scheme == Scheme::I) return run_problem(conditions_problem_scheme1(n, opts));
  if (opts.eps0_fixed) return run_problem(conditions_problem_scheme2(n, *opts.eps0_fixed, opts));
  Certificate zero = run_problem(scheme2_problem(n, Rational(0), opts, true));
  if (zero.verdict != Verdict::certified) return zero;
  for (int k = opts.eps0_start; k <= opts.eps0_stop; ++k) {
    Rational e = Rational::pow2(-k);
    Certificate trial = run_problem(scheme2_problem(n, e, opts, false));
    if (trial.verdict == Verdict::certified) {
      Certificate full = run_problem(conditions_problem_scheme2(n, e, opts));
      full.wall_seconds += zero.wall_seconds + trial.wall_seconds;
      return full;
    }
  }
  // No eps0 in the ladder worked: report the zero stage, inconclusive overall.
  zero.verdict = Verdict::inconclusive;
  return zero;
}

}  // namespace lec
