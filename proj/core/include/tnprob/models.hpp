#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tnprob/network.hpp"

namespace tnprob {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// UGM in TN-dual form: all cores entrywise real and >= 0.
struct Ugm {
  TensorNetwork net;
};

/// Born machine: arbitrary complex cores, probabilities via the Born rule.
struct BornMachine {
  TensorNetwork net;
};

/// Born machine with a set of decohered hidden edges. E_D empty is a plain
/// BM; E_D = E_H is fully decohered.
struct DecoheredBM {
  BornMachine bm;
  std::set<std::string> decohered;
};

/// Locally purified state: every node carries exactly two visible edges, one
/// flagged as a purification edge.
struct Lps {
  TensorNetwork net;
  std::set<std::string> purification;
};

using Model = std::variant<Ugm, BornMachine, DecoheredBM, Lps>;

/// Normalized dense probability table over named visible variables.
/// Outcomes are zero-based in memory; CSV export uses 1-based outcomes.
struct Distribution {
  struct Variable {
    std::string name;
    std::size_t dim;
  };
  std::vector<Variable> variables;
  std::vector<double> table;  // row-major over variables, sums to 1
  double log_z = 0.0;
  double min_entry_raw = 0.0;  // smallest normalized entry before clamping

  std::size_t size() const { return table.size(); }
  double prob(std::span<const std::size_t> outcome) const;
  std::size_t linear_index(std::span<const std::size_t> outcome) const;

  /// Builds from an unnormalized real table (validates shape, normalizes,
  /// records log Z, clamps tiny negatives). Throws on an all-zero table.
  static Distribution from_unnormalized(std::vector<Variable> vars,
                                        const DenseTensor& table,
                                        double imag_tol = 1e-9);

  std::string to_csv() const;
};

double total_variation(const Distribution& a, const Distribution& b);

/// Family-specific validation (base network invariants plus e.g. core
/// non-negativity for UGMs, purification structure for LPS).
ValidationReport validate_model(const Model& m);

Distribution ugm_prob(const Ugm& m);
Distribution bm_prob(const BornMachine& m);
Distribution dbm_prob(const DecoheredBM& m);
Distribution lps_prob(const Lps& m);
Distribution model_prob(const Model& m);

/// Composite TN for Born-rule models: the network and its conjugated copy
/// with visible-edge pairs merged through Delta_3 (keeping the original
/// visible edge ids), and a Delta_4 decoherence tensor on every decohered
/// edge. Its evaluation is entrywise real >= 0 and proportional to the
/// model's distribution.
TensorNetwork build_composite(const BornMachine& m);
TensorNetwork build_composite(const DecoheredBM& m);

/// A non-negative network whose evaluation is proportional to the model's
/// distribution, visible edges = model variables (for LPS, purification
/// edges are already marginalized away).
TensorNetwork prob_network(const Model& m);

/// Sums the named variables out via Delta_1 contraction on the probability
/// network.
Distribution marginalize(const Model& m, const std::set<std::string>& vars);

/// Conditions on outcomes (1-based, matching the file formats) and
/// renormalizes. Zero-probability assignments are an error.
Distribution condition(const Model& m,
                       const std::map<std::string, std::size_t>& assignment);

/// Clique-potential constructor (node-as-RV form). Builds the TN-dual
/// network: one node per potential, one copy-tensor node per variable with an
/// extra visible edge carrying the variable's name.
struct CliqueSpec {
  std::vector<std::string> variables;  // order matches potential modes
  DenseTensor potential;               // real, non-negative
};
Ugm ugm_from_cliques(const std::vector<Distribution::Variable>& variables,
                     const std::vector<CliqueSpec>& cliques);

}  // namespace tnprob
