/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#pragma once

#include <any>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lec/coefficients.hpp"
#include "lec/interval.hpp"
#include "lec/poly.hpp"
#include "lec/ratfunc.hpp"

namespace lec {

using Box = std::vector<Interval>;
using Point = std::vector<Rational>;

/// a . x + c < 0 (strict) or a . x + c <= 0.
struct LinearConstraint {
  std::vector<Rational> a;
  Rational c;
  bool strict = true;
  std::string label;

  Rational at(const Point& x) const;
  /// Range of a . x + c over a box.
  Interval over(const Box& b) const;
};

/// Closed bounding box intersected with linear constraints. Strict
/// constraints are certified on the closed tau-shrunk region
/// a . x + c <= -tau; the strip in between is reported as uncovered.
struct Region {
  std::vector<Var> vars;
  Box box;
  std::vector<LinearConstraint> constraints;
  Rational tau = Rational::pow2(-10);

  /// Throws DomainError on size mismatches, an empty box or tau <= 0.
  void validate() const;
  /// Membership in the tau-shrunk closed region.
  bool contains(const Point& x) const;
  /// Some constraint proves the whole box outside the shrunk region.
  bool excludes(const Box& b) const;
  /// A deterministic point well inside the shrunk region (nullopt if none found).
  std::optional<Point> interior_point() const;
  /// Human-readable strips dropped by the tau shrink.
  std::vector<std::string> uncovered_strips() const;

  /// Two variables only: vertices of box intersected with the shrunk
  /// half-planes (empty when the intersection is empty).
  std::vector<Point> clip2d(const Box& b) const;
  /// The box of the subdivision path ('0' lower, '1' upper half of the
  /// longest edge, ties to the lowest axis).
  Box box_at(const std::string& path) const;

  std::string to_json() const;
  static Region from_json(const std::string& json);
};

/// Axis bisected next: longest edge, ties to the lowest axis.
std::size_t split_axis(const Box& b);

/// The 2-D region {0 <= d2, d2 < d1, d1 + d2 < top} in (d1, d2).
Region triangle_region(const Rational& top, const Rational& tau);
/// Box only, no constraints.
Region box_region(std::vector<Var> vars, Box box, const Rational& tau);

/// Something the engine can bound over boxes. Per-box state (e.g. a
/// Bernstein patch) is carried down the subdivision tree.
class BoxFunction {
 public:
  virtual ~BoxFunction() = default;
  virtual std::string description() const = 0;
  virtual std::any root(const Box& box) const {
    (void)box;
    return {};
  }
  virtual std::pair<std::any, std::any> split(const std::any& state, const Box& box, std::size_t axis) const {
    (void)box;
    (void)axis;
    return {state, state};
  }
  /// Enclosure of the function over `box` (the state belongs to this box).
  /// May throw DomainError when no enclosure is available; the engine
  /// then subdivides.
  virtual Interval enclose(const std::any& state, const Box& box, const Region& region) const = 0;
  /// Exact value, or an enclosure refined until its sign is decided.
  virtual Interval at_point(const Point& x) const = 0;
};

/// Polynomial in the region variables: Bernstein form with inherited
/// subdivision; affine polynomials in two variables are bounded exactly
/// over the box clipped by the region constraints.
std::shared_ptr<BoxFunction> poly_function(const PolyExpr& p, const std::vector<Var>& vars);

/// Surd-scheme quantity at fixed n and eps0; mean-value enclosure.
enum class SurdQuantity { rho1, rho2, delta1, delta2, A1, A2, product, alpha1, alpha2 };
const char* surd_quantity_name(SurdQuantity q);
std::shared_ptr<BoxFunction> surd_function(long n, const Rational& eps0, SurdQuantity q);

enum class Verdict { certified, refuted, inconclusive };
const char* verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& s);

enum class LeafVerdict { certified, excluded, counterexample, depth_exhausted };
const char* leaf_verdict_name(LeafVerdict v);

/// One box inequality f > 0 (or f >= 0 when not strict).
struct Check {
  std::string name;
  std::shared_ptr<BoxFunction> f;
  bool strict = true;
};

/// A paper-level condition implied by a set of checks: it holds on the
/// region when each check holds and `sign` is +1. `exact` evaluates the
/// condition itself at a point (used to promote a failed check into a
/// refutation and for soundness sampling).
struct Condition {
  std::string name;
  std::string via;
  std::vector<std::size_t> checks;
  int sign = 1;
  bool strict = true;
  std::function<Interval(const Point&)> exact;
};

struct EngineOptions {
  int depth_cap = 24;
  int frontier_depth = 4;
  std::uint64_t max_boxes = 1u << 22;  // per subtree
  int workers = 0;                     // 0: LEC_WORKERS or hardware concurrency
};
int default_workers();

struct Problem {
  std::string kind;
  std::string inputs_json;  // canonical; enough to rebuild the problem
  Region region;
  std::vector<Check> checks;
  std::vector<Condition> conditions;
  EngineOptions options;
  std::map<std::string, std::size_t> factor_checks;  // primitive factor text -> check
};

/// Adds a condition f > 0 (f >= 0 when not strict) for a rational function
/// in the region variables: one sign-definite check per distinct factor,
/// shared with earlier conditions, oriented by the sign at an interior point.
std::size_t add_ratfunc_condition(Problem& pb, const std::string& name, const RatFunc& f,
                                  std::function<Interval(const Point&)> exact, bool strict = true);

struct Leaf {
  std::size_t check = 0;
  std::string path;
  Box box;
  LeafVerdict verdict = LeafVerdict::excluded;
  std::optional<Rational> bound;  // certified: lower bound; counterexample: value bound
  Point point;                    // counterexample point
};

struct CheckStats {
  std::uint64_t boxes = 0;
  int max_depth = 0;
  std::uint64_t certified = 0, excluded = 0, counterexamples = 0, exhausted = 0;
};

struct CheckResult {
  Verdict verdict = Verdict::inconclusive;
  CheckStats stats;
};

struct ConditionResult {
  Verdict verdict = Verdict::inconclusive;
  Point witness;  // refuted: point where the condition fails exactly
};

struct Certificate {
  std::string kind;
  std::string inputs_json;
  std::string input_hash;
  std::vector<std::string> check_names;
  std::vector<std::string> check_descriptions;
  std::vector<bool> check_strict;
  std::vector<CheckResult> check_results;
  std::vector<std::string> condition_names;
  std::vector<std::string> condition_via;
  std::vector<ConditionResult> condition_results;
  std::vector<Leaf> leaves;  // canonical order: (check, path)
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> uncovered;
  double wall_seconds = 0;  // not serialized

  std::string to_json() const;
};

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

/// Largest number with `bits` significant bits that is <= x.
Rational round_down_significant(const Rational& x, int bits);

Certificate run_problem(const Problem& problem);

/// Generic entry points.
Certificate certify_positive(std::shared_ptr<BoxFunction> f, const Region& region, const EngineOptions& opts = {});
/// f > 0 for a rational function in the region variables, by certifying
/// every factor sign-definite. Replayable.
Certificate certify_positive(const RatFunc& f, const Region& region, const EngineOptions& opts = {});
/// f - g >= 0 via Bernstein bounds. Replayable.
Certificate certify_poly_bound(const PolyExpr& f, const PolyExpr& g, const Region& region, const EngineOptions& opts = {});

struct ConditionsOptions {
  Rational c0 = 4;
  Rational tau = Rational::pow2(-10);
  EngineOptions engine;
  /// Surd scheme: candidate eps0 values are 2^-start ... 2^-stop.
  int eps0_start = 10, eps0_stop = 40;
  /// Surd scheme replay: skip the search and use this eps0.
  std::optional<Rational> eps0_fixed;
};

/// Paper conditions alpha_i, beta_i, gamma_i > 0 and beta1 beta2 > gamma1 gamma2
/// on {0 <= d2 < d1 < 2 - d2 - c0/n} at fixed n.
Certificate certify_conditions(long n, Scheme scheme, const ConditionsOptions& opts);

/// Problem builders (also used by replay).
Problem conditions_problem_scheme1(long n, const ConditionsOptions& opts);
/// `zero_stage`: also certify the eps0 = 0 group (the full certificate).
Problem conditions_problem_scheme2(long n, const Rational& eps0, const ConditionsOptions& opts,
                                   bool zero_stage = true);

struct ReplayReport {
  bool hash_ok = false;
  bool structure_ok = false;
  std::uint64_t leaves_checked = 0;
  std::uint64_t mismatches = 0;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> problems;
  bool ok() const { return hash_ok && structure_ok && mismatches == 0; }
};

/// Rebuilds the problem from the recorded inputs and re-verifies every leaf.
ReplayReport replay(const std::string& certificate_json, int workers = 0);

/// Registers a rebuild function for certificates of `kind` (used by
/// modules outside the certifier, e.g. the asymptotic bounds).
void register_problem_kind(const std::string& kind, std::function<Problem(const std::string& inputs_json)> build);

/// Exact evaluation of every condition at `samples` random rational points
/// of the shrunk region. Returns the number of violations (0 = sound).
std::uint64_t soundness_sample(const Problem& problem, std::uint64_t samples, std::uint64_t seed);

}  // namespace lec
