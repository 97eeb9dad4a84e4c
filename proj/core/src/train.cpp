#include "tnprob/train.hpp"

#include <chrono>
#include <cmath>

namespace tnprob {

TrainResult train(const HmmMixtureParams& init, const SequenceDataset& train_ds,
                  const SequenceDataset& test_ds, const TrainConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  TrainResult res;
  HmmMixtureParams p = init;
  std::vector<double> theta = p.flatten();
  std::vector<double> m(theta.size(), 0.0), v(theta.size(), 0.0);

  auto record = [&](std::size_t epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_nll = nll(p, train_ds);
    rec.test_nll = nll(p, test_ds);
    res.trajectory.push_back(rec);
    if (res.trajectory.size() == 1 || rec.test_nll < res.best_test_nll) {
      res.best_test_nll = rec.test_nll;
      res.best_epoch = epoch;
      res.best_params = p;
    }
  };

  record(0);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    NllGradient g;
    try {
      g = nll_grad(p, train_ds);
    } catch (const LearnError&) {
      res.diverged = true;
      break;
    }
    bool finite = std::isfinite(g.value);
    for (double x : g.grad) finite = finite && std::isfinite(x);
    if (!finite) {
      res.diverged = true;
      break;
    }
    const double t = static_cast<double>(epoch);
    const double bc1 = 1.0 - std::pow(cfg.beta1, t);
    const double bc2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g.grad[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g.grad[i] * g.grad[i];
      theta[i] -= cfg.lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + cfg.eps);
    }
    p.unflatten(theta);
    record(epoch);
  }

  res.final_params = p;
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

}  // namespace tnprob
