#include <benchmark/benchmark.h>

#include "ars/certainty.hpp"
#include "ars/difficulty.hpp"
#include "ars/engine.hpp"
#include "ars/scripted_backend.hpp"
#include "ars/theorem_lab.hpp"

namespace {

ars::TokenDistribution uniform(int k) {
  ars::TokenDistribution d;
  for (int i = 0; i < k; ++i) d.candidates.push_back({"t" + std::to_string(i), 1.0 / k});
  return d;
}

void BM_HeuristicDifficulty(benchmark::State& state) {
  const auto lex = ars::DifficultyLexicon::defaults();
  ars::Query q;
  q.text = "Let $f(x) = x^2 - 4x + 3$ be a polynomial function. Find the sum of every root of the equation "
           "$f(x) = 0$ and the remainder when $f(7)$ is divided by $5$.";
  for (auto _ : state) benchmark::DoNotOptimize(ars::heuristic_difficulty(q, lex));
}
BENCHMARK(BM_HeuristicDifficulty);

void BM_EntropyConfidence(benchmark::State& state) {
  const std::vector<ars::TokenDistribution> dists(static_cast<std::size_t>(state.range(0)), uniform(20));
  for (auto _ : state) benchmark::DoNotOptimize(ars::entropy_confidence(dists, 20));
}
BENCHMARK(BM_EntropyConfidence)->Arg(1)->Arg(16);

void BM_DetectTrigger(benchmark::State& state) {
  const auto triggers = ars::TriggerSet::defaults();
  const std::vector<std::string> tokens{" Wait", " the", "But,", "Waiter", " Alternatively", " 42"};
  for (auto _ : state) {
    for (const auto& t : tokens) benchmark::DoNotOptimize(ars::detect_trigger(t, triggers));
  }
}
BENCHMARK(BM_DetectTrigger);

void BM_ResampleNonTrigger(benchmark::State& state) {
  const auto triggers = ars::TriggerSet::defaults();
  ars::TokenDistribution d = uniform(19);
  for (auto& c : d.candidates) c.probability *= 0.5;
  d.candidates.push_back({" Wait", 0.5});
  ars::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(ars::resample_non_trigger(d, triggers, rng));
}
BENCHMARK(BM_ResampleNonTrigger);

void BM_ArsScriptedInstance(benchmark::State& state) {
  ars::SyntheticFamilySpec family;
  family.n_instances = 1;
  family.t_star_range = {static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
  const auto scripts = ars::synth_instances(family);
  ars::ScriptedBackend backend(scripts[0]);
  const auto q = ars::scripted_query(0, scripts[0]);
  const auto lex = ars::DifficultyLexicon::defaults();
  ars::SuppressionConfig cfg;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.rng_seed = seed++;
    benchmark::DoNotOptimize(ars::generate_with_ars(q, backend, cfg, lex));
  }
}
BENCHMARK(BM_ArsScriptedInstance)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
