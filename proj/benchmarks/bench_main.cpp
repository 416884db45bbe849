#include <random>

#include <benchmark/benchmark.h>

#include "facial/measures.hpp"
#include "facial/ordermap.hpp"
#include "facial/rewrite.hpp"
#include "facial/search.hpp"
#include "facial/tower.hpp"

using namespace facial;

namespace {

std::vector<Word> random_words(std::size_t count, std::size_t len, Index max_letter) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<Index> letter(1, max_letter);
  std::vector<Word> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Index> v(len);
    for (auto& x : v) x = letter(rng);
    out.emplace_back(v);
  }
  return out;
}

void BM_FlatNormalForm(benchmark::State& state) {
  const auto words = random_words(256, static_cast<std::size_t>(state.range(0)), 8);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_form(RuleSystem::flat, words[i++ % words.size()]));
  }
}
BENCHMARK(BM_FlatNormalForm)->Arg(4)->Arg(12)->Arg(48);

void BM_DescendingNormalForm(benchmark::State& state) {
  const auto words = random_words(256, static_cast<std::size_t>(state.range(0)), 8);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_form(RuleSystem::descending, words[i++ % words.size()]));
  }
}
BENCHMARK(BM_DescendingNormalForm)->Arg(4)->Arg(12)->Arg(48);

void BM_PseudoInverseOfProduct(benchmark::State& state) {
  const auto words = random_words(256, 8, 6);
  std::size_t i = 0;
  for (auto _ : state) {
    const OrderMap f = represent_S(words[i % words.size()]);
    const OrderMap g = embed_Sop(words[(i + 1) % words.size()]);
    benchmark::DoNotOptimize(pseudo_inverse(compose(f, g)));
    ++i;
  }
}
BENCHMARK(BM_PseudoInverseOfProduct);

void BM_WalkMeasure(benchmark::State& state) {
  const BaseStep nu = BaseStep::uniform(1, 4);
  for (auto _ : state) benchmark::DoNotOptimize(walk_measure(nu, state.range(0)));
}
BENCHMARK(BM_WalkMeasure)->Arg(3)->Arg(6);

void BM_SolveLp(benchmark::State& state) {
  const Universe u(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(u));
}
BENCHMARK(BM_SolveLp)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_TowerCompare(benchmark::State& state) {
  TowerConfig cfg;
  cfg.m = 16;
  const Tower t(cfg);
  std::vector<TowerValue> vals;
  for (const auto& g : grid_tuples(16, 2)) vals.push_back(t.value(g));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compare(vals[i % vals.size()], vals[(i * 7 + 3) % vals.size()]));
    ++i;
  }
}
BENCHMARK(BM_TowerCompare);

void BM_TowerDefect(benchmark::State& state) {
  TowerConfig cfg;
  cfg.m = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(tower_defect(cfg));
}
BENCHMARK(BM_TowerDefect)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
