#pragma once

#include <cstdint>
#include <vector>

#include "tnprob/hmm.hpp"

namespace tnprob {

struct TrainConfig {
  std::size_t epochs = 30;
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 0 = initial parameters
  double train_nll = 0.0;
  double test_nll = 0.0;
};

struct TrainResult {
  HmmMixtureParams final_params;
  HmmMixtureParams best_params;
  std::vector<EpochRecord> trajectory;
  std::size_t best_epoch = 0;  // earliest epoch with minimal test NLL
  double best_test_nll = 0.0;
  bool diverged = false;  // non-finite loss or gradient encountered
  double wall_seconds = 0.0;
};

/// Full-batch Adam on the mean NLL. The trajectory records train and
/// held-out NLL before training (epoch 0) and after every epoch.
TrainResult train(const HmmMixtureParams& init, const SequenceDataset& train_ds,
                  const SequenceDataset& test_ds, const TrainConfig& cfg);

}  // namespace tnprob
