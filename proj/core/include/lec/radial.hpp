/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The lec authors
 */

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lec/errors.hpp"
#include "lec/rational.hpp"

namespace lec::radial {

using real = long double;

/// State at one radius: (r, u, u', v, v').
struct Sample {
  real r = 0, u = 0, du = 0, v = 0, dv = 0;
};

enum class Component { u, v };
const char* component_name(Component c);

struct FirstZero {
  Component which = Component::u;
  real r = 0;
  real err = 0;  // error estimate for r
};

/// One accepted step with its continuous extension.
struct Segment {
  real r0 = 0, h = 0;
  std::array<std::array<real, 4>, 5> rcont{};
  std::array<real, 4> eval(real r) const;
};

struct Trajectory {
  long n = 0;
  Rational p, q;
  real u0 = 0, v0 = 0;
  real r_max = 0;
  real rel_tol = 0, abs_tol = 0;
  std::vector<Sample> samples;
  std::vector<Segment> segments;  // covers [samples[1].r, samples.back().r]
  std::optional<FirstZero> first_zero;
  std::size_t rejected = 0;

  real r_end() const { return samples.back().r; }
  /// Dense output at r in [0, r_end()]; the series start below samples[1].r.
  Sample at(real r) const;
};

/// Step size underflow. `last()` is the last accepted state.
class StiffnessError : public DomainError {
 public:
  StiffnessError(const std::string& what, Sample last) : DomainError(what), last_(last) {}
  const Sample& last() const noexcept { return last_; }

 private:
  Sample last_;
};

inline constexpr real kDefaultRelTol = 1e-10L;
inline constexpr real kDefaultAbsTol = 1e-12L;

/// u'' + (n-1)/r u' = -v^p, v'' + (n-1)/r v' = -u^q, u(0) = u0, v(0) = v0,
/// u'(0) = v'(0) = 0. Stops at the first sign change of u or v, or at r_max.
Trajectory shoot(long n, const Rational& p, const Rational& q, real u0, real v0, real r_max,
                 real rel_tol = kDefaultRelTol, real abs_tol = kDefaultAbsTol);

/// Scaling exponents a = 2(p+1)/(pq-1), b = 2(q+1)/(pq-1).
std::pair<Rational, Rational> scaling_exponents(const Rational& p, const Rational& q);

struct ComparisonReport {
  real initial_excess = 0;  // v0^{p+1}/(p+1) - u0^{q+1}/(q+1)
  bool initial_ok = true;
  real max_excess = 0;  // over samples with u, v >= 0
  real at_r = 0;
  real tolerance = 0;
  bool flagged = false;  // max_excess > tolerance
};
/// v^{p+1}/(p+1) - u^{q+1}/(q+1) along the trajectory. Requires p >= q, pq > 1.
ComparisonReport check_comparison(const Trajectory& t);

struct RescaleReport {
  Rational R;
  real alpha = 0, beta = 0;
  real max_dev_u = 0, max_dev_v = 0;  // relative, over the common domain
  real tolerance = 0;                 // rel_tol of the trajectories
  std::size_t compared = 0;
  std::optional<real> zero_original, zero_rescaled;
  real zero_dev = 0;  // |R * zero_rescaled - zero_original| / zero_original
  bool ok(real factor = 10) const;
};
/// Fresh shot from (R^a u0, R^b v0) compared with R^a u(R r), R^b v(R r).
RescaleReport rescale_check(const Trajectory& t, const Rational& R);

enum class Criticality { subcritical, critical, supercritical };
const char* criticality_name(Criticality c);

struct Classification {
  Criticality kind = Criticality::subcritical;
  Rational gap;  // 1/(p+1) + 1/(q+1) - (1 - 2/n)
  bool in_theorem_region = false;  // gap >= 4/n^2
};
Classification classify(long n, const Rational& p, const Rational& q);

/// max over samples of |r^{n-1} u'(r) + int_0^r t^{n-1} v^p dt| (and the same
/// for v), relative to the size of the integral.
real flux_residual(const Trajectory& t);

std::string to_csv(const Trajectory& t);
std::string to_svg(const Trajectory& t);
std::string to_json(const Trajectory& t);

}  // namespace lec::radial
