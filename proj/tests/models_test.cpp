#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tnprob/models.hpp"
#include "tnprob/rng.hpp"
#include "tnprob/verify.hpp"

using namespace tnprob;

namespace {

Distribution dist_from_real(std::vector<Distribution::Variable> vars,
                            std::vector<double> raw) {
  return Distribution::from_unnormalized(
      std::move(vars), DenseTensor::from_real({raw.size()}, raw));
}

double table_diff(const Distribution& a, const std::vector<double>& b) {
  REQUIRE(a.table.size() == b.size());
  double d = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    d = std::max(d, std::abs(a.table[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("distribution normalization and indexing") {
  Distribution d = dist_from_real({{"x", 2}, {"y", 2}}, {1, 2, 3, 4});
  CHECK(d.prob(std::vector<std::size_t>{0, 1}) == doctest::Approx(0.2));
  CHECK(d.log_z == doctest::Approx(std::log(10.0)));
  CHECK_THROWS_AS(
      (void)d.prob(std::vector<std::size_t>{2, 0}), ModelError);
  CHECK_THROWS_AS(dist_from_real({{"x", 2}}, {0, 0}), ModelError);
  CHECK_THROWS_AS(dist_from_real({{"x", 2}}, {1, -1}), ModelError);
  // tiny negatives clamp but are remembered
  Distribution c = dist_from_real({{"x", 2}}, {1.0, -1e-13});
  CHECK(c.table[1] == 0.0);
  CHECK(c.min_entry_raw < 0.0);
}

TEST_CASE("distribution csv uses one-based outcomes") {
  Distribution d = dist_from_real({{"x", 2}}, {1, 3});
  CHECK(d.to_csv() == "x,probability\n1,0.25\n2,0.75\n");
}

TEST_CASE("total variation") {
  Distribution a = dist_from_real({{"x", 2}}, {1, 1});
  Distribution b = dist_from_real({{"x", 2}}, {1, 0});
  CHECK(total_variation(a, b) == doctest::Approx(0.5));
  CHECK(total_variation(a, a) == 0.0);
}

TEST_CASE("single-node BM probabilities follow the Born rule") {
  TensorNetwork net;
  net.graph.nodes = {"n"};
  net.graph.edges = {Edge{"x", {"n"}, 2}};
  net.graph.visible_order = {"x"};
  net.cores["n"] = DenseTensor({2}, {cplx{1, 1}, cplx{2, 0}});
  net.mode_edges["n"] = {"x"};
  BornMachine bm{net};
  Distribution p = bm_prob(bm);
  CHECK(p.table[0] == doctest::Approx(1.0 / 3.0));  // |1+i|^2 = 2 of Z = 6
  CHECK(p.table[1] == doctest::Approx(2.0 / 3.0));

  // composite-network route agrees
  Distribution q =
      Distribution::from_unnormalized(p.variables, evaluate(build_composite(bm)));
  CHECK(table_diff(q, p.table) < 1e-12);
}

TEST_CASE("ugm_from_cliques matches dense factor products") {
  // P(x,y,z) proportional to phi1(x,y) phi2(y,z)
  std::vector<Distribution::Variable> vars{{"x", 2}, {"y", 3}, {"z", 2}};
  Rng rng(50);
  DenseTensor p1({2, 3}), p2({3, 2});
  for (std::size_t i = 0; i < p1.size(); ++i) p1[i] = cplx{rng.uniform01(), 0};
  for (std::size_t i = 0; i < p2.size(); ++i) p2[i] = cplx{rng.uniform01(), 0};
  Ugm m = ugm_from_cliques(vars, {{{"x", "y"}, p1}, {{"y", "z"}, p2}});
  Distribution got = ugm_prob(m);
  REQUIRE(got.variables.size() == 3);
  CHECK(got.variables[0].name == "x");
  std::vector<double> want;
  double z = 0.0;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 3; ++y)
      for (std::size_t zz = 0; zz < 2; ++zz) {
        double v = p1.at({x, y}).real() * p2.at({y, zz}).real();
        want.push_back(v);
        z += v;
      }
  for (auto& v : want) v /= z;
  CHECK(table_diff(got, want) < 1e-12);

  CHECK_THROWS_AS(ugm_from_cliques(vars, {{{"w"}, p1}}), ModelError);
}

TEST_CASE("dbm_prob matches decohered enumeration on random models") {
  for (std::uint64_t t = 0; t < 20; ++t) {
    Rng rng(Rng::mix(51, t));
    DecoheredBM m = (t % 2 == 0) ? random_fdbm(rng) : random_cut_dbm(rng).model;
    Distribution got = dbm_prob(m);
    Distribution want = Distribution::from_unnormalized(
        got.variables, test::naive_dbm_table(m));
    CHECK(table_diff(got, want.table) < 1e-10);
  }
}

TEST_CASE("partially decohered models interpolate between BM and UGM") {
  Rng rng(52);
  BornMachine bm = random_bm(rng);
  Distribution p_bm = bm_prob(bm);
  Distribution p_empty = dbm_prob(DecoheredBM{bm, {}});
  CHECK(table_diff(p_empty, p_bm.table) < 1e-10);
}

TEST_CASE("lps_prob sums squared amplitudes over purification indices") {
  for (std::uint64_t t = 0; t < 10; ++t) {
    Rng rng(Rng::mix(53, t));
    Lps l = random_lps(rng);
    Distribution got = lps_prob(l);

    // oracle: full amplitude table, then sum |.|^2 over purification vars
    DenseTensor amp = test::naive_evaluate(l.net);
    const auto& order = l.net.graph.visible_order;
    std::vector<std::size_t> dims;
    for (const auto& v : order) dims.push_back(l.net.graph.find_edge(v)->dim);
    std::vector<double> want(got.table.size(), 0.0);
    std::vector<std::size_t> idx(order.size(), 0);
    for (std::size_t lin = 0; lin < amp.size(); ++lin) {
      std::size_t keep = 0;
      for (std::size_t i = 0; i < order.size(); ++i)
        if (!l.purification.count(order[i])) keep = keep * dims[i] + idx[i];
      want[keep] += std::norm(amp[lin]);
      for (std::size_t i = order.size(); i-- > 0;) {
        if (++idx[i] < dims[i]) break;
        idx[i] = 0;
      }
    }
    double z = 0.0;
    for (double v : want) z += v;
    for (double& v : want) v /= z;
    CHECK(table_diff(got, want) < 1e-10);
  }
}

TEST_CASE("marginalize matches dense-table summation") {
  Rng rng(54);
  Ugm m = random_ugm(rng);
  Distribution full = ugm_prob(m);
  REQUIRE(full.variables.size() >= 1);
  const std::string drop = full.variables.back().name;
  Distribution got = marginalize(Model{m}, {drop});

  std::size_t tail = full.variables.back().dim;
  std::vector<double> want(full.table.size() / tail, 0.0);
  for (std::size_t i = 0; i < full.table.size(); ++i)
    want[i / tail] += full.table[i];
  CHECK(table_diff(got, want) < 1e-12);

  CHECK_THROWS_AS(marginalize(Model{m}, {"nope"}), ModelError);
}

TEST_CASE("condition matches dense-table slicing") {
  TensorNetwork net;
  net.graph.nodes = {"u", "w"};
  net.graph.edges = {Edge{"x", {"u"}, 2}, Edge{"e", {"u", "w"}, 2},
                     Edge{"y", {"w"}, 3}};
  net.graph.visible_order = {"x", "y"};
  Rng rng(55);
  DenseTensor a({2, 2}), b({2, 3});
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = cplx{rng.uniform01(), 0};
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = cplx{rng.uniform01(), 0};
  net.cores["u"] = a;
  net.cores["w"] = b;
  net.mode_edges["u"] = {"x", "e"};
  net.mode_edges["w"] = {"e", "y"};
  Ugm m{net};
  Distribution full = ugm_prob(m);
  Distribution got = condition(Model{m}, {{"y", 2}});  // one-based outcome
  std::vector<double> want(2);
  double z = 0.0;
  for (std::size_t x = 0; x < 2; ++x) {
    want[x] = full.table[x * 3 + 1];
    z += want[x];
  }
  for (auto& v : want) v /= z;
  CHECK(table_diff(got, want) < 1e-12);

  CHECK_THROWS_AS(condition(Model{m}, {{"y", 9}}), ModelError);
  CHECK_THROWS_AS(condition(Model{m}, {{"nope", 1}}), ModelError);
}

TEST_CASE("conditioning on a zero-probability outcome is an error") {
  TensorNetwork net;
  net.graph.nodes = {"n"};
  net.graph.edges = {Edge{"x", {"n"}, 2}};
  net.graph.visible_order = {"x"};
  net.cores["n"] = DenseTensor({2}, {cplx{1, 0}, cplx{0, 0}});
  net.mode_edges["n"] = {"x"};
  Ugm m{net};
  CHECK_THROWS_AS(condition(Model{m}, {{"x", 2}}), ModelError);
}

TEST_CASE("validate_model family rules") {
  Rng rng(56);
  Ugm u = random_ugm(rng);
  CHECK(validate_model(Model{u}).ok());
  u.net.cores.begin()->second[0] = cplx{-1.0, 0.0};
  CHECK_FALSE(validate_model(Model{u}).ok());

  DecoheredBM d = random_fdbm(rng);
  CHECK(validate_model(Model{d}).ok());
  d.decohered.insert("not-an-edge");
  CHECK_FALSE(validate_model(Model{d}).ok());

  Lps l = random_lps(rng);
  CHECK(validate_model(Model{l}).ok());
  l.purification.clear();
  CHECK_FALSE(validate_model(Model{l}).ok());
}
