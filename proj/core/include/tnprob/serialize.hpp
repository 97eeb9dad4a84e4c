#pragma once

#include <string>

#include "tnprob/models.hpp"

namespace tnprob {

struct SerializationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Network schema (JSON):
///   {"nodes": [...],
///    "edges": [{"id": ..., "nodes": [...], "dim": ...}, ...],
///    "visible_order": [...],
///    "cores": {node: {"modes": [edge ids],
///                     "shape": [...],
///                     "data": [[re, im], ...]}}}
/// Doubles are emitted with shortest round-trip formatting, so the
/// serialize/parse round trip is bit-exact for finite values.
std::string network_to_json(const TensorNetwork& net);
TensorNetwork network_from_json(const std::string& text);

/// Model files wrap a network with a family tag and family metadata:
///   {"family": "ugm" | "bm" | "dbm" | "lps",
///    "network": {...},
///    "decohered": [...],      (dbm)
///    "purification": [...]}   (lps)
std::string model_to_json(const Model& m);
Model model_from_json(const std::string& text);

void save_model(const Model& m, const std::string& path);
Model load_model(const std::string& path);

std::string model_family_name(const Model& m);

}  // namespace tnprob
