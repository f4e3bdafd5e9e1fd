// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <json.hpp>

#include "lec/certifier.hpp"
#include "lec/errors.hpp"

using namespace lec;
using nlohmann::json;

namespace {

Rational R(long a, long b = 1) { return Rational::of(a, b); }
PolyExpr P(Var v) { return PolyExpr::var(v); }
const std::vector<Var> kD = {Var::d1, Var::d2};

Region case1(const Rational& tau = Rational::pow2(-10)) {
  // {0 <= d2 < d1 <= 1/2}
  Region r = box_region(kD, {Interval(0, R(1, 2)), Interval(0, R(1, 2))}, tau);
  r.constraints.push_back({{R(-1), R(1)}, 0, true, "d2 < d1"});
  return r;
}

EngineOptions workers(int w) {
  EngineOptions o;
  o.workers = w;
  return o;
}

}  // namespace

TEST_CASE("region validation") {
  CHECK_THROWS_AS(box_region(kD, {Interval(0, 1)}, Rational::pow2(-10)), DomainError);
  CHECK_THROWS_AS(box_region(kD, {Interval(0, 1), Interval(0, 1)}, 0), DomainError);
  Region r = box_region(kD, {Interval(0, 1), Interval(0, 1)}, Rational::pow2(-10));
  r.constraints.push_back({{R(1)}, 0, true, ""});
  CHECK_THROWS_AS(r.validate(), DomainError);
  CHECK_THROWS_AS(certify_positive(RatFunc(1), r), DomainError);
}

TEST_CASE("box_at reproduces bisection and paths are canonical") {
  Region r = triangle_region(R(3, 2), Rational::pow2(-10));
  Box b = r.box_at("");
  CHECK(b == r.box);
  Box b0 = r.box_at("0");
  CHECK(split_axis(r.box) == 0);
  CHECK(b0[0].hi() == r.box[0].mid());
  Box b01 = r.box_at("01");
  CHECK(b01[split_axis(b0)].lo() == b0[split_axis(b0)].mid());
}

TEST_CASE("1 + d1 d2 is certified at depth 0") {
  PolyExpr f = PolyExpr(1) + P(Var::d1) * P(Var::d2);
  for (const Box& b : {Box{Interval(0, 2), Interval(0, 2)}, Box{Interval(R(1, 3), R(3, 4)), Interval(1, 2)}}) {
    Certificate c = certify_positive(poly_function(f, kD), box_region(kD, b, Rational::pow2(-10)));
    CHECK(c.verdict == Verdict::certified);
    REQUIRE(c.leaves.size() == 1);
    CHECK(c.leaves[0].path.empty());
    CHECK(*c.leaves[0].bound >= 1);
  }
}

TEST_CASE("d1 - d2 on the first case region") {
  RatFunc f = RatFunc::var(Var::d1) - RatFunc::var(Var::d2);
  Certificate c = certify_positive(f, case1());
  CHECK(c.verdict == Verdict::certified);
  REQUIRE(c.uncovered.size() == 1);
  // Without the shrink the diagonal touches zero and nothing is certified.
  Certificate raw = certify_positive(poly_function(f.as_polynomial(), kD),
                                     box_region(kD, {Interval(0, R(1, 2)), Interval(0, R(1, 2))}, Rational::pow2(-10)));
  CHECK(raw.verdict == Verdict::refuted);
}

TEST_CASE("-1 is refuted at the centre") {
  Region r = box_region(kD, {Interval(0, 2), Interval(0, 1)}, Rational::pow2(-10));
  Certificate c = certify_positive(poly_function(PolyExpr(-1), kD), r);
  CHECK(c.verdict == Verdict::refuted);
  REQUIRE(c.leaves.size() == 1);
  CHECK(c.leaves[0].verdict == LeafVerdict::counterexample);
  CHECK(c.leaves[0].point == Point{R(1), R(1, 2)});
  Certificate c2 = certify_positive(RatFunc(-1), r);
  CHECK(c2.verdict == Verdict::refuted);
}

TEST_CASE("boxes outside the region are excluded") {
  // Region d1 + d2 <= 1/4 inside [0,1]^2; f = 1 - 2 d1 > 0 there.
  Region r = box_region(kD, {Interval(0, 1), Interval(0, 1)}, Rational::pow2(-10));
  r.constraints.push_back({{R(1), R(1)}, R(-1, 4), false, ""});
  PolyExpr f = PolyExpr(1) - PolyExpr(2) * P(Var::d1) * P(Var::d1);
  Certificate c = certify_positive(poly_function(f, kD), r);
  CHECK(c.verdict == Verdict::certified);
  bool any_excluded = false;
  for (const auto& l : c.leaves) any_excluded = any_excluded || l.verdict == LeafVerdict::excluded;
  CHECK(any_excluded);
}

TEST_CASE("depth exhaustion is inconclusive, not certified") {
  // d1^2 >= 0 is tight at 0 and the strict check never closes there.
  Region r = box_region(kD, {Interval(-1, 1), Interval(0, 1)}, Rational::pow2(-10));
  EngineOptions o;
  o.depth_cap = 6;
  Certificate c = certify_positive(poly_function(P(Var::d1) * P(Var::d1), kD), r, o);
  CHECK(c.verdict == Verdict::inconclusive);
}

TEST_CASE("poly bound is non-strict") {
  // d1^2 - 2 d1 d2 + d2^2 >= 0 with equality on the diagonal.
  PolyExpr f = P(Var::d1) * P(Var::d1) + P(Var::d2) * P(Var::d2);
  PolyExpr g = PolyExpr(2) * P(Var::d1) * P(Var::d2);
  Region r = box_region(kD, {Interval(0, 1), Interval(0, 1)}, Rational::pow2(-10));
  Certificate c = certify_poly_bound(f, g, r);
  CHECK(c.verdict != Verdict::refuted);
  Certificate bad = certify_poly_bound(g, f + PolyExpr(R(1, 100)), r);
  CHECK(bad.verdict == Verdict::refuted);
}

TEST_CASE("scheme I certified at n = 13 and 35") {
  ConditionsOptions o;
  for (long n : {13L, 35L}) {
    Certificate c = certify_conditions(n, Scheme::I, o);
    CHECK(c.verdict == Verdict::certified);
    for (const auto& cr : c.condition_results) CHECK(cr.verdict == Verdict::certified);
    CHECK(std::find(c.condition_names.begin(), c.condition_names.end(), "beta1*beta2 - gamma1*gamma2") !=
          c.condition_names.end());
  }
}

TEST_CASE("scheme I at n = 9 is refuted with an exact witness") {
  Certificate c = certify_conditions(9, Scheme::I, {});
  CHECK(c.verdict == Verdict::refuted);
  bool found = false;
  for (std::size_t i = 0; i < c.condition_names.size(); ++i)
    if (c.condition_names[i] == "beta1*beta2 - gamma1*gamma2" && c.condition_results[i].verdict == Verdict::refuted) {
      const Point& w = c.condition_results[i].witness;
      auto k = scheme1(9, w[0], w[1]);
      CHECK((k.beta1 * k.beta2 - k.gamma1 * k.gamma2).sign() < 0);
      found = true;
    }
  CHECK(found);
}

TEST_CASE("conditions preconditions") {
  ConditionsOptions o;
  o.c0 = 2;
  CHECK_THROWS_AS(certify_conditions(13, Scheme::I, o), DomainError);
  CHECK_THROWS_AS(certify_conditions(2, Scheme::I, {}), DomainError);
  o.c0 = 8;
  CHECK_THROWS_AS(certify_conditions(4, Scheme::I, o), DomainError);
}

TEST_CASE("scheme I: soundness, replay, determinism, tau monotonicity") {
  ConditionsOptions o;
  Problem pb = conditions_problem_scheme1(13, o);
  Certificate c = run_problem(pb);
  REQUIRE(c.verdict == Verdict::certified);
  CHECK(soundness_sample(pb, 10000, 1) == 0);

  std::string js = c.to_json();
  ReplayReport rep = replay(js, 1);
  CHECK(rep.ok());
  CHECK(rep.verdict == Verdict::certified);
  CHECK(rep.leaves_checked == c.leaves.size());

  for (int w : {1, 4, 16}) {
    ConditionsOptions ow = o;
    ow.engine = workers(w);
    CHECK(certify_conditions(13, Scheme::I, ow).to_json() == js);
  }

  for (int k : {8, 6, 4}) {
    ConditionsOptions ot = o;
    ot.tau = Rational::pow2(-k);
    CHECK(certify_conditions(13, Scheme::I, ot).verdict == Verdict::certified);
  }
}

TEST_CASE("replay rejects tampering") {
  Certificate c = certify_conditions(13, Scheme::I, {});
  json j = json::parse(c.to_json());

  json bad_bound = j;
  for (auto& leaf : bad_bound["tree"])
    if (leaf["verdict"] == "certified-positive") {
      leaf["value_bound"] = "1000000";
      break;
    }
  CHECK(replay(bad_bound.dump()).mismatches > 0);

  json bad_inputs = j;
  bad_inputs["inputs"]["c0"] = "3";
  CHECK_FALSE(replay(bad_inputs.dump()).hash_ok);

  json dropped = j;
  dropped["tree"].erase(dropped["tree"].size() - 1);
  CHECK_FALSE(replay(dropped.dump()).structure_ok);

  json bad_verdict = j;
  bad_verdict["verdict"] = "REFUTED";
  CHECK_FALSE(replay(bad_verdict.dump()).ok());
}

TEST_CASE("scheme II certified at n = 7 with a recorded eps0 and replays") {
  Certificate c = certify_conditions(7, Scheme::II, {});
  REQUIRE(c.verdict == Verdict::certified);
  json in = json::parse(c.inputs_json);
  Rational eps0 = Rational::parse(in.at("eps0").get<std::string>());
  CHECK(eps0.sign() > 0);
  CHECK(eps0 <= Rational::pow2(-10));
  bool zero_stage = false, alpha = false;
  for (const auto& name : c.condition_names) {
    zero_stage = zero_stage || name.rfind("eps0=0:", 0) == 0;
    alpha = alpha || name == "eps0=" + eps0.str() + ":alpha1";
  }
  CHECK(zero_stage);
  CHECK(alpha);
  ReplayReport rep = replay(c.to_json());
  CHECK(rep.ok());
  CHECK(rep.verdict == Verdict::certified);
  ConditionsOptions o;
  o.eps0_fixed = eps0;
  CHECK(soundness_sample(conditions_problem_scheme2(7, eps0, o), 300, 7) == 0);
}

TEST_CASE("round_down_significant") {
  CHECK(round_down_significant(R(1, 3), 4) == R(5, 16));
  CHECK(round_down_significant(R(-1, 3), 4) == R(-11, 32));
  CHECK(round_down_significant(Rational::pow2(100) + 1, 8) == Rational::pow2(100));
  CHECK(round_down_significant(R(0), 8) == 0);
}

TEST_CASE("fnv1a") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}
