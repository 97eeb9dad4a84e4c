#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tnprob/data.hpp"
#include "tnprob/models.hpp"

namespace tnprob {

struct LearnError : std::runtime_error {
  LearnError(const std::string& msg, std::ptrdiff_t seq_index = -1)
      : std::runtime_error(msg), sequence_index(seq_index) {}
  std::ptrdiff_t sequence_index;  // offending sequence, or -1
};

enum class Family { UgmMixture, DbmMixture };

Family family_from_name(const std::string& name);
std::string family_name(Family f);

/// Unconstrained log-space HMM tables: transition (N x N), emission
/// (N x d_obs), initial (N), all row-major.
struct HmmTables {
  std::vector<double> log_trans;
  std::vector<double> log_emit;
  std::vector<double> log_init;
};

/// Parameters of the matched-size mixture pair. The UGM mixture combines two
/// independent HMM components; the DBM mixture shares one magnitude set
/// between an HMM component and a Born-machine component whose cores carry
/// complex phases exp(2*pi*i*theta) on top of the square-rooted potentials.
/// Both families expose 2|Phi| + 1 free parameters.
struct HmmMixtureParams {
  Family family = Family::UgmMixture;
  std::size_t hidden_dim = 1;
  std::size_t alphabet = 2;
  std::size_t seq_len = 1;
  HmmTables phi1, phi2;    // UGM mixture
  HmmTables phi3, theta3;  // DBM mixture (theta in turns)
  double mix_logit = 0.0;

  std::size_t table_param_count() const {  // |Phi|
    return hidden_dim * hidden_dim + hidden_dim * alphabet + hidden_dim;
  }
  std::size_t param_count() const { return 2 * table_param_count() + 1; }

  /// Flat parameter vector: first table set, second table set, mixture
  /// logit. Gradients are reported in this order.
  std::vector<double> flatten() const;
  void unflatten(std::span<const double> flat);
};

/// Log tables and mixture logit ~ standard normal; phases ~ Unif[0,1) turns.
HmmMixtureParams init_params(Family family, std::size_t hidden_dim,
                             std::size_t alphabet, std::size_t seq_len,
                             std::uint64_t seed);

/// Chain UGM over hidden variables h1..hT and observed o1..oT with
/// unnormalized potentials exp(log_init), exp(log_trans), exp(log_emit).
Ugm build_hmm_ugm(const HmmMixtureParams& p, int component);

/// Born machine for the coherent DBM-mixture component: same chain graph
/// with hidden variables latent (no visible edge) and cores
/// exp(2*pi*i*theta) * sqrt(exp(log_phi)).
BornMachine build_hmm_bm(const HmmMixtureParams& p);

/// Mixture likelihood of one observation sequence (symbols 1-based).
double mixture_log_prob(const HmmMixtureParams& p,
                        std::span<const std::uint8_t> seq);
double mixture_prob(const HmmMixtureParams& p,
                    std::span<const std::uint8_t> seq);

/// Mean negative log likelihood over the dataset.
double nll(const HmmMixtureParams& p, const SequenceDataset& ds);

struct NllGradient {
  double value = 0.0;
  std::vector<double> grad;  // flatten() order
};

/// Reverse-mode gradient of nll with respect to every unconstrained
/// parameter.
NllGradient nll_grad(const HmmMixtureParams& p, const SequenceDataset& ds);

}  // namespace tnprob
