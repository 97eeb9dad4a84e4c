#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tnprob/tensor.hpp"

namespace tnprob {

struct NetworkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An edge is visible when incident to exactly one node and hidden when
/// incident to two distinct nodes.
struct Edge {
  std::string id;
  std::vector<std::string> nodes;  // size 1 (visible) or 2 (hidden)
  std::size_t dim = 1;

  bool visible() const { return nodes.size() == 1; }
  bool hidden() const { return nodes.size() == 2; }
};

struct TnGraph {
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
  std::vector<std::string> visible_order;  // bijection onto visible edges

  const Edge* find_edge(const std::string& id) const;
  bool has_node(const std::string& id) const;
  std::vector<std::string> incident_edges(const std::string& node) const;
};

/// Tensor network: graph plus one core per node. The per-node mode order is
/// stored explicitly in mode_edges and is part of the model identity.
struct TensorNetwork {
  TnGraph graph;
  std::map<std::string, DenseTensor> cores;
  std::map<std::string, std::vector<std::string>> mode_edges;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate(const TensorNetwork& net);

/// Contracts all cores; output modes follow graph.visible_order. The budget
/// caps intermediate element counts and defaults to the TNPROB_BUDGET
/// environment variable when set.
DenseTensor evaluate(const TensorNetwork& net);
DenseTensor evaluate(const TensorNetwork& net, std::size_t budget);

std::size_t contraction_budget();

/// True iff removing the given edges splits the node set into two or more
/// non-empty components.
bool is_cut_set(const TnGraph& g, const std::set<std::string>& edges);

/// Connected components of the node set after removing the given edges.
std::vector<std::set<std::string>> components_after_removal(
    const TnGraph& g, const std::set<std::string>& removed);

struct GaugeTransform {
  std::string edge;
  std::vector<std::vector<cplx>> matrix;  // square, invertible
};

/// Contracts M into one incident core and M^{-1} into the other, leaving the
/// evaluated tensor unchanged. Rejects visible edges and matrices with
/// condition number above 1e12.
TensorNetwork apply_gauge(const TensorNetwork& net, const GaugeTransform& t);

struct NonnegGaugeFactors {
  std::vector<std::size_t> perm;  // P: column j has its 1 in row perm[j]
  std::vector<double> diag;       // D: strictly positive entries
};

/// Factors m = P D with P a permutation and D positive diagonal. Succeeds
/// exactly when m and m^{-1} are entrywise non-negative; returns nullopt
/// otherwise. Throws on singular input.
std::optional<NonnegGaugeFactors> factor_nonneg_gauge(
    const std::vector<std::vector<cplx>>& m);

/// Replaces a hidden edge by a third-order copy tensor node, exposing one new
/// visible edge (named new_visible_id, default "Z@<edge>") appended to
/// visible_order.
TensorNetwork promote_hidden_edge(const TensorNetwork& net,
                                  const std::string& edge,
                                  const std::string& new_visible_id = "");

/// Attaches a vector to a visible edge (making it hidden), e.g. Delta_1 for
/// marginalization or a basis vector for conditioning.
TensorNetwork attach_vector(const TensorNetwork& net, const std::string& edge,
                            const DenseTensor& vec,
                            const std::string& node_id = "");

}  // namespace tnprob
