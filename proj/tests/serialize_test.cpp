#include <doctest.h>

#include <cstdio>

#include "tnprob/serialize.hpp"
#include "tnprob/verify.hpp"

using namespace tnprob;

namespace {

bool same_network(const TensorNetwork& a, const TensorNetwork& b) {
  if (a.graph.nodes != b.graph.nodes) return false;
  if (a.graph.visible_order != b.graph.visible_order) return false;
  if (a.graph.edges.size() != b.graph.edges.size()) return false;
  for (std::size_t i = 0; i < a.graph.edges.size(); ++i) {
    const Edge& x = a.graph.edges[i];
    const Edge& y = b.graph.edges[i];
    if (x.id != y.id || x.nodes != y.nodes || x.dim != y.dim) return false;
  }
  if (a.mode_edges != b.mode_edges) return false;
  for (const auto& [n, core] : a.cores) {
    auto it = b.cores.find(n);
    if (it == b.cores.end()) return false;
    if (core.shape() != it->second.shape()) return false;
    for (std::size_t i = 0; i < core.size(); ++i)
      if (core[i] != it->second[i]) return false;  // bit-exact
  }
  return true;
}

}  // namespace

TEST_CASE("network json round trip is bit exact") {
  for (std::uint64_t t = 0; t < 10; ++t) {
    Rng rng(Rng::mix(70, t));
    BornMachine bm = random_bm(rng);
    std::string text = network_to_json(bm.net);
    TensorNetwork back = network_from_json(text);
    CHECK(same_network(bm.net, back));
    CHECK(network_to_json(back) == text);
  }
}

TEST_CASE("model json carries the family and metadata") {
  Rng rng(71);
  SUBCASE("ugm") {
    Model m{random_ugm(rng)};
    CHECK(model_family_name(m) == "ugm");
    Model back = model_from_json(model_to_json(m));
    CHECK(model_family_name(back) == "ugm");
  }
  SUBCASE("dbm keeps the decohered set") {
    DecoheredBM d = random_fdbm(rng);
    Model back = model_from_json(model_to_json(Model{d}));
    REQUIRE(std::holds_alternative<DecoheredBM>(back));
    CHECK(std::get<DecoheredBM>(back).decohered == d.decohered);
  }
  SUBCASE("lps keeps the purification set") {
    Lps l = random_lps(rng);
    Model back = model_from_json(model_to_json(Model{l}));
    REQUIRE(std::holds_alternative<Lps>(back));
    CHECK(std::get<Lps>(back).purification == l.purification);
  }
  SUBCASE("bm") {
    Model m{random_bm(rng)};
    Model back = model_from_json(model_to_json(m));
    CHECK(std::holds_alternative<BornMachine>(back));
  }
}

TEST_CASE("loading validates and rejects malformed input") {
  CHECK_THROWS_AS(model_from_json("not json"), SerializationError);
  CHECK_THROWS_AS(model_from_json(R"({"family":"nope","network":{}})"),
                  SerializationError);
  // structurally broken network: core shape disagrees with the edge dim
  Rng rng(72);
  Ugm u = random_ugm(rng);
  std::string text = model_to_json(Model{u});
  auto pos = text.find("\"dim\": ");
  REQUIRE(pos != std::string::npos);
  text[pos + 7] = '9';
  CHECK_THROWS_AS(model_from_json(text), SerializationError);
}

TEST_CASE("save and load through a file") {
  Rng rng(73);
  Model m{random_fdbm(rng)};
  const std::string path = "serialize_test_model.json";
  save_model(m, path);
  Model back = load_model(path);
  CHECK(model_to_json(back) == model_to_json(m));
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_model("does-not-exist.json"), SerializationError);
}
