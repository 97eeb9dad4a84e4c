#include <benchmark/benchmark.h>

#include "tnprob/hmm.hpp"
#include "tnprob/models.hpp"
#include "tnprob/rng.hpp"
#include "tnprob/verify.hpp"

using namespace tnprob;

namespace {

void BM_NetworkEvaluate(benchmark::State& state) {
  Rng rng(7);
  BornMachine m = random_bm(rng);
  for (auto _ : state) {
    auto t = evaluate(m.net);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_NetworkEvaluate);

void BM_BornDistribution(benchmark::State& state) {
  Rng rng(8);
  BornMachine m = random_bm(rng);
  for (auto _ : state) {
    Distribution d = bm_prob(m);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_BornDistribution);

void BM_ChainLikelihood(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto t = static_cast<std::size_t>(state.range(1));
  HmmMixtureParams p = init_params(Family::DbmMixture, n, 2, t, 3);
  Rng rng(4);
  std::vector<std::uint8_t> seq(t);
  for (auto& s : seq) s = static_cast<std::uint8_t>(1 + rng.below(2));
  for (auto _ : state) {
    double v = mixture_log_prob(p, seq);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_ChainLikelihood)->Args({4, 16})->Args({8, 16})->Args({4, 256});

void BM_ChainGradient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  HmmMixtureParams p = init_params(Family::DbmMixture, n, 2, 16, 3);
  SequenceDataset ds;
  ds.seq_len = 16;
  Rng rng(5);
  for (int i = 0; i < 32; ++i) {
    std::vector<std::uint8_t> seq(16);
    for (auto& s : seq) s = static_cast<std::uint8_t>(1 + rng.below(2));
    ds.sequences.push_back(std::move(seq));
  }
  for (auto _ : state) {
    NllGradient g = nll_grad(p, ds);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_ChainGradient)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
