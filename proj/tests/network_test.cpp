#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tnprob/network.hpp"
#include "tnprob/rng.hpp"
#include "tnprob/verify.hpp"

using namespace tnprob;

namespace {

double max_diff(const DenseTensor& a, const DenseTensor& b) {
  REQUIRE(a.shape() == b.shape());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double scale(const DenseTensor& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i]));
  return std::max(s, 1.0);
}

TensorNetwork two_node_chain() {
  TensorNetwork net;
  net.graph.nodes = {"u", "w"};
  net.graph.edges = {Edge{"x", {"u"}, 2}, Edge{"e", {"u", "w"}, 3},
                     Edge{"y", {"w"}, 2}};
  net.graph.visible_order = {"x", "y"};
  Rng rng(40);
  DenseTensor a({2, 3}), b({3, 2});
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = cplx{rng.normal(), rng.normal()};
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = cplx{rng.normal(), rng.normal()};
  net.cores["u"] = a;
  net.cores["w"] = b;
  net.mode_edges["u"] = {"x", "e"};
  net.mode_edges["w"] = {"e", "y"};
  return net;
}

}  // namespace

TEST_CASE("evaluate matches edge-assignment enumeration on random networks") {
  for (std::uint64_t t = 0; t < 30; ++t) {
    Rng rng(Rng::mix(100, t));
    BornMachine bm = random_bm(rng);
    REQUIRE(validate(bm.net).ok());
    DenseTensor got = evaluate(bm.net);
    DenseTensor want = test::naive_evaluate(bm.net);
    CHECK(max_diff(got, want) / scale(want) < 1e-12);
  }
}

TEST_CASE("validate reports structural violations") {
  TensorNetwork net = two_node_chain();
  CHECK(validate(net).ok());

  SUBCASE("self loop") {
    net.graph.edges.push_back(Edge{"loop", {"u", "u"}, 2});
    CHECK_FALSE(validate(net).ok());
  }
  SUBCASE("visible_order missing an edge") {
    net.graph.visible_order = {"x"};
    CHECK_FALSE(validate(net).ok());
  }
  SUBCASE("visible_order listing a hidden edge") {
    net.graph.visible_order = {"x", "y", "e"};
    CHECK_FALSE(validate(net).ok());
  }
  SUBCASE("core shape mismatch") {
    net.cores["u"] = DenseTensor({2, 2});
    CHECK_FALSE(validate(net).ok());
  }
  SUBCASE("mode list out of sync with incident edges") {
    net.mode_edges["u"] = {"e", "e"};
    CHECK_FALSE(validate(net).ok());
  }
  SUBCASE("edge to unknown node") {
    net.graph.edges.push_back(Edge{"bad", {"nope"}, 2});
    CHECK_FALSE(validate(net).ok());
  }
}

TEST_CASE("gauge transform leaves the evaluated tensor unchanged") {
  TensorNetwork net = two_node_chain();
  DenseTensor before = evaluate(net);
  GaugeTransform g;
  g.edge = "e";
  Rng rng(41);
  g.matrix.assign(3, std::vector<cplx>(3));
  for (auto& row : g.matrix)
    for (auto& x : row) x = cplx{rng.normal(), rng.normal()};
  TensorNetwork gauged = apply_gauge(net, g);
  CHECK(validate(gauged).ok());
  DenseTensor after = evaluate(gauged);
  CHECK(max_diff(before, after) / scale(before) < 1e-12);
}

TEST_CASE("gauge transform rejects visible edges and singular matrices") {
  TensorNetwork net = two_node_chain();
  GaugeTransform vis{"x", {{cplx{1, 0}, {}}, {{}, cplx{1, 0}}}};
  CHECK_THROWS_AS(apply_gauge(net, vis), NetworkError);
  GaugeTransform sing{"e",
                      {{cplx{1, 0}, cplx{1, 0}, {}},
                       {cplx{1, 0}, cplx{1, 0}, {}},
                       {{}, {}, cplx{1, 0}}}};
  CHECK_THROWS_AS(apply_gauge(net, sing), NetworkError);
  GaugeTransform wrong_dim{"e", {{cplx{1, 0}}}};
  CHECK_THROWS_AS(apply_gauge(net, wrong_dim), NetworkError);
}

TEST_CASE("factor_nonneg_gauge") {
  SUBCASE("monomial matrix factors as P times D") {
    std::vector<std::vector<cplx>> m{{cplx{0, 0}, cplx{3, 0}},
                                     {cplx{2, 0}, cplx{0, 0}}};
    auto f = factor_nonneg_gauge(m);
    REQUIRE(f.has_value());
    CHECK(f->perm == std::vector<std::size_t>{1, 0});
    CHECK(f->diag[0] == doctest::Approx(2.0));
    CHECK(f->diag[1] == doctest::Approx(3.0));
  }
  SUBCASE("identity") {
    std::vector<std::vector<cplx>> m{{cplx{1, 0}, {}}, {{}, cplx{1, 0}}};
    auto f = factor_nonneg_gauge(m);
    REQUIRE(f.has_value());
    CHECK(f->perm == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("non-negative but non-monomial is rejected") {
    // inverse has a negative entry
    std::vector<std::vector<cplx>> m{{cplx{1, 0}, cplx{1, 0}},
                                     {{}, cplx{1, 0}}};
    CHECK_FALSE(factor_nonneg_gauge(m).has_value());
  }
  SUBCASE("negative entry is rejected") {
    std::vector<std::vector<cplx>> m{{cplx{1, 0}, {}}, {{}, cplx{-1, 0}}};
    CHECK_FALSE(factor_nonneg_gauge(m).has_value());
  }
  SUBCASE("singular input throws") {
    std::vector<std::vector<cplx>> m{{cplx{1, 0}, cplx{1, 0}},
                                     {cplx{1, 0}, cplx{1, 0}}};
    CHECK_THROWS_AS(factor_nonneg_gauge(m), NetworkError);
  }
}

TEST_CASE("promote_hidden_edge exposes the latent index") {
  TensorNetwork net = two_node_chain();
  TensorNetwork prom = promote_hidden_edge(net, "e");
  CHECK(validate(prom).ok());
  REQUIRE(prom.graph.visible_order.size() == 3);
  CHECK(prom.graph.visible_order.back() == "Z@e");

  // summing the new index recovers the original evaluation
  DenseTensor before = evaluate(net);
  TensorNetwork summed = attach_vector(prom, "Z@e", copy_tensor(1, 3));
  DenseTensor after = evaluate(summed);
  CHECK(max_diff(before, after) / scale(before) < 1e-12);

  // pinning the new index picks one term of the hidden sum
  DenseTensor expect({2, 2});
  const DenseTensor& a = net.cores.at("u");
  const DenseTensor& b = net.cores.at("w");
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      expect.set({x, y}, a.at({x, std::size_t{1}}) * b.at({std::size_t{1}, y}));
  TensorNetwork pinned = attach_vector(prom, "Z@e", basis_vector(1, 3));
  CHECK(max_diff(evaluate(pinned), expect) / scale(expect) < 1e-12);

  CHECK_THROWS_AS(promote_hidden_edge(net, "x"), NetworkError);
}

TEST_CASE("attach_vector marginalizes a visible edge") {
  TensorNetwork net = two_node_chain();
  DenseTensor full = evaluate(net);
  TensorNetwork marg = attach_vector(net, "y", copy_tensor(1, 2));
  CHECK(marg.graph.visible_order == std::vector<std::string>{"x"});
  DenseTensor got = evaluate(marg);
  for (std::size_t x = 0; x < 2; ++x) {
    cplx want = full.at({x, std::size_t{0}}) + full.at({x, std::size_t{1}});
    CHECK(std::abs(got[x] - want) < 1e-12);
  }
  CHECK_THROWS_AS(attach_vector(net, "e", copy_tensor(1, 3)), NetworkError);
}

TEST_CASE("cut sets and components") {
  TnGraph g;
  g.nodes = {"a", "b", "c"};
  g.edges = {Edge{"ab", {"a", "b"}, 2}, Edge{"bc", {"b", "c"}, 2},
             Edge{"va", {"a"}, 2}};
  g.visible_order = {"va"};
  CHECK(is_cut_set(g, {"ab"}));
  CHECK_FALSE(is_cut_set(g, {"va"}));
  auto comps = components_after_removal(g, {"ab", "bc"});
  CHECK(comps.size() == 3);
  CHECK_THROWS_AS(is_cut_set(g, {"nope"}), NetworkError);
}

TEST_CASE("contraction budget env override") {
  CHECK(contraction_budget() >= 1);
}
