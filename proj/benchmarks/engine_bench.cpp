#include <benchmark/benchmark.h>

#include <random>

#include "esq/classification.hpp"
#include "esq/higher_order.hpp"
#include "esq/wedge.hpp"

using namespace esq;

namespace {

std::vector<Word> random_words(int n, int length, int count) {
  std::mt19937 gen(1);
  std::uniform_int_distribution<int> letter(1, n);
  std::vector<Word> out;
  for (int t = 0; t < count; ++t) {
    std::vector<int> w;
    for (int p = 0; p < length; ++p) w.push_back(letter(gen));
    out.push_back(Word::from_letters(w));
  }
  return out;
}

void BM_ScalarArithmetic(benchmark::State& state) {
  const Scalar q = Scalar::q();
  const Scalar a = (q * q - 1) / (q + Scalar::s_power(3));
  const Scalar b = (1 - Scalar::q_power(5)) / (1 + q);
  for (auto _ : state) benchmark::DoNotOptimize((a + b) * (a - b) / (a * b + 1));
}
BENCHMARK(BM_ScalarArithmetic);

void BM_StructureTensors(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_projectors(n));
}
BENCHMARK(BM_StructureTensors)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_SphereAlgebraSetup(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    SphereAlgebra x(n);
    benchmark::DoNotOptimize(x.confluent());
  }
}
BENCHMARK(BM_SphereAlgebraSetup)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

// Fresh algebra per iteration so the memo tables start empty.
void BM_NormalFormColdDegree6(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto words = random_words(n, 6, 50);
  for (auto _ : state) {
    state.PauseTiming();
    SphereAlgebra x(n);
    state.ResumeTiming();
    for (const Word& w : words) benchmark::DoNotOptimize(x.normal_form(w));
  }
}
BENCHMARK(BM_NormalFormColdDegree6)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CompatibilityConditions(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SphereAlgebra x(n);
  const FirstOrderCalculus g(x, Sign::plus);
  for (auto _ : state) benchmark::DoNotOptimize(build_conditions(x, g.rules(Basis::dx)).all_zero());
}
BENCHMARK(BM_CompatibilityConditions)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Classification(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(classify(Constraint::free, n));
}
BENCHMARK(BM_Classification)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_SigmaBimoduleCheck(benchmark::State& state) {
  const SphereAlgebra x(3);
  const FirstOrderCalculus g(x, Sign::plus);
  const TensorCalculus tc(g);
  for (auto _ : state) benchmark::DoNotOptimize(sigma_bimodule_check(tc, Scalar::q(), Basis::gamma_minus));
}
BENCHMARK(BM_SigmaBimoduleCheck)->Unit(benchmark::kMillisecond);

void BM_WedgeNormalForm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto words = random_words(n, n, 50);
  for (auto _ : state) {
    state.PauseTiming();
    const SphereAlgebra x(n);
    const FirstOrderCalculus g(x, Sign::plus);
    const WedgeCalculus w(g);
    state.ResumeTiming();
    for (const Word& idx : words) benchmark::DoNotOptimize(w.normal_form(idx));
  }
}
BENCHMARK(BM_WedgeNormalForm)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
