#pragma once

#include "tnprob/models.hpp"

namespace tnprob {

struct TransformError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-node real phase tables (units: turns, phase = exp(2*pi*i*theta)),
/// shaped like the corresponding cores. Missing nodes mean zero phases.
struct PhaseAssignment {
  std::map<std::string, DenseTensor> theta;
};

/// Maps each decohered edge to one of its incident nodes.
struct EdgeToNodeAssignment {
  std::map<std::string, std::string> node_of_edge;
};

/// Fully-decohered BM -> UGM on the same graph with potentials |A|^2.
/// Requires E_D = E_H.
Ugm fdbm_to_ugm(const DecoheredBM& m);

/// UGM -> fully-decohered BM with cores exp(2*pi*i*theta) * sqrt(phi). The
/// distribution is independent of the phases.
DecoheredBM ugm_to_fdbm(const Ugm& m, const PhaseAssignment& phases = {});

/// Exposes the latent RV on a decohered edge as a new visible variable named
/// "Z@<edge>"; marginalizing it recovers the original distribution.
DecoheredBM readout_edge(const DecoheredBM& m, const std::string& edge);

struct ReadoutResult {
  DecoheredBM model;            // BM with the edge decohered and read out
  Distribution before;          // bm_prob of the input
  Distribution after;           // distribution with the readout marginalized
  double tv_distance = 0.0;
  bool distribution_changed = false;
};

/// Forces a latent readout on a non-decohered hidden edge of a BM and
/// reports whether the post-marginalization distribution differs from the
/// original (the observer effect). The "after" distribution equals dbm_prob
/// of the DBM with that single edge decohered.
ReadoutResult force_readout_bm(const BornMachine& m, const std::string& edge,
                               double change_tol = 1e-12);

struct CondIndependenceReport {
  bool conditioning_edges_cut_graph = false;
  struct ZResult {
    std::vector<std::size_t> z;  // zero-based outcome per conditioning edge
    double prob = 0.0;
    double residual = 0.0;
  };
  std::vector<ZResult> per_z;
  double max_residual = 0.0;
};

/// Reads out the given decohered edges and checks, for every assignment z
/// with P(z) > zero_tol, that the conditional distribution factorizes across
/// the two graph partitions induced by removing those edges.
CondIndependenceReport check_cond_independence(
    const DecoheredBM& m, const std::set<std::string>& conditioning_edges,
    double zero_tol = 1e-12);

/// LPS with n nodes / m hidden edges -> DBM with 2n nodes, n visible edges,
/// m+n hidden edges; each purification edge attaches to a new Delta_1 node
/// and becomes a decohered edge.
DecoheredBM lps_to_dbm(const Lps& m);

/// DBM -> LPS on the same graph, purification dimension at node v equal to
/// the product of the bond dimensions of the decohered edges assigned to v.
/// Every node of the input must carry exactly one visible edge. When f is
/// empty, each decohered edge maps to its incident node with the smaller id.
Lps dbm_to_lps(const DecoheredBM& m, const EdgeToNodeAssignment& f = {});

}  // namespace tnprob
