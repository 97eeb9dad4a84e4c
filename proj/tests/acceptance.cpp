// Acceptance gate: one line per criterion, nonzero exit iff any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tnprob/data.hpp"
#include "tnprob/train.hpp"
#include "tnprob/verify.hpp"

using namespace tnprob;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& name,
            const std::string& detail) {
  if (!pass) ++failures;
  std::printf("criterion %2d [%s] %s (%s)\n", id, pass ? "pass" : "FAIL",
              name.c_str(), detail.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

int main() {
  double min_raw = 0.0;
  auto absorb = [&](const SuiteResult& r) {
    min_raw = std::min(min_raw, r.min_raw_entry);
    return r;
  };

  {  // 1: fully decohered BM equals converted UGM, 50 models, <= 30 s
    auto t0 = std::chrono::steady_clock::now();
    SuiteResult r = absorb(run_suite("thm1", 50, 0, 1e-10));
    const double s = seconds_since(t0);
    report(1, r.ok() && s <= 30.0, "decohered-to-undirected equivalence",
           "residual " + fmt(r.checks[0].residual) + ", " + fmt(s) + " s");
  }
  {  // 2: 50 UGMs x 5 phase draws: invariance + potential round trip
    auto t0 = std::chrono::steady_clock::now();
    SuiteResult r = absorb(run_suite("cor1", 50, 0, 1e-10));
    const double s = seconds_since(t0);
    report(2, r.ok() && s <= 30.0, "phase independence and round trip",
           "residuals " + fmt(r.checks[0].residual) + " / " +
               fmt(r.checks[1].residual) + ", " + fmt(s) + " s");
  }
  {  // 3: 30 decohered cut sets + the coherent counterexample, <= 60 s
    auto t0 = std::chrono::steady_clock::now();
    SuiteResult r = absorb(run_suite("thm2", 30, 0, 1e-10));
    const double s = seconds_since(t0);
    report(3, r.ok() && s <= 60.0, "conditional independence across cuts",
           "residual " + fmt(r.checks[1].residual) + ", counterexample " +
               fmt(r.checks[2].residual) + ", " + fmt(s) + " s");
  }
  {  // 4: 30 + 30 purified-form conversions, both directions + graph counts
    SuiteResult r = absorb(run_suite("lps", 30, 0, 1e-10));
    report(4, r.ok(), "purified-form equivalence",
           "residuals " + fmt(r.checks[0].residual) + " / " +
               fmt(r.checks[2].residual));
  }
  SuiteResult observer = absorb(run_suite("observer", 30, 0, 0.0));
  SuiteResult gauge = absorb(run_suite("gauge", 30, 0, 1e-8));
  {  // 5: every squared-amplitude table stayed >= -1e-14 before clamping
    report(5, min_raw >= -1e-14, "non-negativity before clamping",
           "most negative entry " + fmt(min_raw));
  }
  {  // 6: observer-effect witness plus unchanged non-negative controls
    report(6, observer.ok(), "observer effect",
           "witness TV " + fmt(observer.checks[0].residual) + ", controls " +
               fmt(observer.checks[1].residual));
  }
  {  // 7: gauge invariance, sign-factorization oracle, decohered witness
    SuiteResult nn = run_suite("nonneg", 100, 0, 0.0);
    report(7, gauge.ok() && nn.ok(), "gauge freedom",
           "invariance " + fmt(gauge.checks[0].residual) + ", witness TV " +
               fmt(gauge.checks[1].residual) + ", oracle disagreements " +
               fmt(nn.checks[0].residual));
  }
  {  // 8: reverse-mode gradients vs central differences, 20 points per family
    SuiteResult r = run_suite("grad", 20, 0, 1e-4);
    report(8, r.ok(), "gradient correctness",
           "max relative error " + fmt(r.checks[0].residual));
  }
  {  // 9: chain likelihoods vs hidden-path enumeration
    double worst = 0.0;
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
      Rng rng(Rng::mix(900, trial));
      const std::size_t n = 1 + rng.below(3);
      const std::size_t t = 2 + rng.below(4);
      for (Family fam : {Family::UgmMixture, Family::DbmMixture}) {
        HmmMixtureParams p = init_params(fam, n, 2, t, Rng::mix(901, trial));
        std::vector<std::uint8_t> seq(t);
        for (auto& s : seq) s = static_cast<std::uint8_t>(1 + rng.below(2));
        const double got = mixture_prob(p, seq);
        const double want = test::oracle_mixture_prob(p, seq);
        worst = std::max(worst, std::abs(got - want) / std::max(want, 1e-300));
      }
    }
    report(9, worst <= 1e-10, "likelihood vs path enumeration",
           "max relative error " + fmt(worst));
  }
  {  // 10: Bars and Stripes 8x8, T=16, N=4, 3 replications, 30 epochs;
     //     matched parameter counts; DBM <= UGM held-out NLL in >= 2 of 3
    auto t0 = std::chrono::steady_clock::now();
    auto imgs = bars_and_stripes(8, 8);
    SequenceDataset all = make_sequence_dataset(imgs, 16);
    bool parity = true;
    int wins = 0;
    bool diverged = false;
    std::string detail;
    double mean_ugm = 0.0, mean_dbm = 0.0;
    for (std::uint64_t r = 0; r < 3; ++r) {
      const std::uint64_t split_seed = Rng::mix(0, r);
      auto [tr, te] = split(all, 0.7, split_seed);
      double best[2] = {0.0, 0.0};
      int fi = 0;
      for (Family fam : {Family::UgmMixture, Family::DbmMixture}) {
        HmmMixtureParams init =
            init_params(fam, 4, 2, 16, Rng::mix(split_seed, 1 + fi));
        if (fi == 1)
          parity = parity && init.param_count() ==
                                 init_params(Family::UgmMixture, 4, 2, 16, 0)
                                     .param_count();
        TrainConfig cfg;  // 30 epochs, adaptive defaults
        TrainResult res = train(init, tr, te, cfg);
        diverged |= res.diverged;
        best[fi++] = res.best_test_nll;
      }
      mean_ugm += best[0] / 3.0;
      mean_dbm += best[1] / 3.0;
      if (best[1] <= best[0]) ++wins;
      detail += (detail.empty() ? "" : ", ") + std::string("rep") +
                std::to_string(r) + " ugm " + fmt(best[0]) + " dbm " +
                fmt(best[1]);
    }
    const double s = seconds_since(t0);
    report(10,
           parity && !diverged && wins >= 2 && s <= 1200.0,
           "experiment reproduction (directional)",
           detail + "; wins " + std::to_string(wins) + "/3, mean ugm " +
               fmt(mean_ugm) + " dbm " + fmt(mean_dbm) + ", " + fmt(s) + " s");
  }
  return failures == 0 ? 0 : 1;
}
