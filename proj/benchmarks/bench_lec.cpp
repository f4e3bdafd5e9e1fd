// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "lec/asymptotic.hpp"
#include "lec/bernstein.hpp"
#include "lec/certifier.hpp"
#include "lec/coefficients.hpp"
#include "lec/radial.hpp"

using namespace lec;

static void BM_RationalProduct(benchmark::State& st) {
  Rational a = Rational::parse("123456789123456789/987654321"), b = Rational::parse("-55555555555/7777777");
  for (auto _ : st) benchmark::DoNotOptimize(a * b + a / b);
}
BENCHMARK(BM_RationalProduct);

static void BM_PolyProduct(benchmark::State& st) {
  PolyExpr a = printed_A3(), b = printed_A4();
  for (auto _ : st) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_PolyProduct);

static void BM_Scheme1Point(benchmark::State& st) {
  Rational d1 = Rational::of(3, 4), d2 = Rational::of(1, 8);
  for (auto _ : st) benchmark::DoNotOptimize(scheme1(13, d1, d2));
}
BENCHMARK(BM_Scheme1Point);

static void BM_BernsteinBuild(benchmark::State& st) {
  Region r = wide_triangle();
  PolyExpr t = printed_T();
  for (auto _ : st) benchmark::DoNotOptimize(BernsteinPatch::build(t, r.vars, r.box).min_coefficient());
}
BENCHMARK(BM_BernsteinBuild);

static void BM_CertifyScheme1(benchmark::State& st) {
  ConditionsOptions o;
  o.engine.workers = 1;
  for (auto _ : st) benchmark::DoNotOptimize(certify_conditions(st.range(0), Scheme::I, o).verdict);
}
BENCHMARK(BM_CertifyScheme1)->Arg(13)->Arg(35)->Unit(benchmark::kMillisecond);

static void BM_ReplayScheme1(benchmark::State& st) {
  std::string js = certify_conditions(13, Scheme::I, {}).to_json();
  for (auto _ : st) benchmark::DoNotOptimize(replay(js, 1).ok());
}
BENCHMARK(BM_ReplayScheme1)->Unit(benchmark::kMillisecond);

static void BM_Tail(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(verify_tail(35).verdict);
}
BENCHMARK(BM_Tail)->Unit(benchmark::kMillisecond);

static void BM_RadialShoot(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(radial::shoot(5, Rational(2), Rational(2), 1, 1, 1000).first_zero);
}
BENCHMARK(BM_RadialShoot);

BENCHMARK_MAIN();
