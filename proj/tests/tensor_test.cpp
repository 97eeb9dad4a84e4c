#include <doctest.h>

#include <cmath>

#include "tnprob/rng.hpp"
#include "tnprob/tensor.hpp"

using namespace tnprob;

namespace {

DenseTensor random_tensor(Rng& rng, std::vector<std::size_t> shape) {
  DenseTensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i] = cplx{rng.normal(), rng.normal()};
  return t;
}

// definitional single-pair contraction, no permutes or matmul
DenseTensor naive_contract(const DenseTensor& a, std::size_t k,
                           const DenseTensor& b, std::size_t k2) {
  std::vector<std::size_t> shape;
  for (std::size_t i = 0; i < a.order(); ++i)
    if (i != k) shape.push_back(a.dim(i));
  for (std::size_t i = 0; i < b.order(); ++i)
    if (i != k2) shape.push_back(b.dim(i));
  DenseTensor out(shape);
  std::vector<std::size_t> ai(a.order(), 0), bi(b.order(), 0);
  auto step = [](std::vector<std::size_t>& idx, const DenseTensor& t) {
    for (std::size_t i = t.order(); i-- > 0;) {
      if (++idx[i] < t.dim(i)) return true;
      idx[i] = 0;
    }
    return false;
  };
  do {
    do {
      if (ai[k] != bi[k2]) continue;
      std::vector<std::size_t> oi;
      for (std::size_t i = 0; i < a.order(); ++i)
        if (i != k) oi.push_back(ai[i]);
      for (std::size_t i = 0; i < b.order(); ++i)
        if (i != k2) oi.push_back(bi[i]);
      out.set(oi, out.at(std::span<const std::size_t>(oi)) +
                      a.at(std::span<const std::size_t>(ai)) *
                          b.at(std::span<const std::size_t>(bi)));
    } while (step(bi, b));
  } while (step(ai, a));
  return out;
}

double max_diff(const DenseTensor& a, const DenseTensor& b) {
  REQUIRE(a.shape() == b.shape());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("scalar and shape basics") {
  DenseTensor zero;
  CHECK(zero.order() == 0);
  CHECK(zero.size() == 1);
  DenseTensor s = DenseTensor::scalar(cplx{2, 3});
  CHECK(s[0] == cplx{2, 3});
  DenseTensor t({2, 3});
  CHECK(t.size() == 6);
  t.set({1, 2}, cplx{5, 0});
  CHECK(t.at({1, 2}) == cplx{5, 0});
  CHECK(t[1 * 3 + 2] == cplx{5, 0});
}

TEST_CASE("contract equals matrix multiplication") {
  DenseTensor a({2, 3}, {1, 2, 3, 4, 5, 6});
  DenseTensor b({3, 2}, {7, 8, 9, 10, 11, 12});
  DenseTensor c = contract(a, 1, b, 0);
  // c[i,j] = sum_k a[i,k] b[k,j]
  CHECK(c.at({0, 0}) == cplx{58, 0});
  CHECK(c.at({0, 1}) == cplx{64, 0});
  CHECK(c.at({1, 0}) == cplx{139, 0});
  CHECK(c.at({1, 1}) == cplx{154, 0});
}

TEST_CASE("contract matches definitional enumeration on random tensors") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 1 + rng.below(3);
    DenseTensor a = random_tensor(
        rng, {1 + rng.below(3), d, 1 + rng.below(3)});
    DenseTensor b = random_tensor(rng, {1 + rng.below(3), d});
    CHECK(max_diff(contract(a, 1, b, 1), naive_contract(a, 1, b, 1)) < 1e-12);
  }
}

TEST_CASE("contract_multi over two shared modes") {
  Rng rng(12);
  DenseTensor a = random_tensor(rng, {2, 3, 2});
  DenseTensor b = random_tensor(rng, {3, 4, 2});
  std::vector<std::size_t> ka{1, 2}, kb{0, 2};
  DenseTensor got = contract_multi(a, ka, b, kb);
  // oracle: contract one pair, then trace the duplicated pair by hand
  DenseTensor out({2, 4});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      cplx s{0, 0};
      for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t q = 0; q < 2; ++q)
          s += a.at({i, p, q}) * b.at({p, j, q});
      out.set({i, j}, s);
    }
  CHECK(max_diff(got, out) < 1e-12);
}

TEST_CASE("contraction is bilinear") {
  Rng rng(13);
  DenseTensor a = random_tensor(rng, {2, 3});
  DenseTensor a2 = random_tensor(rng, {2, 3});
  DenseTensor b = random_tensor(rng, {3, 2});
  DenseTensor sum({2, 3});
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = a[i] + a2[i];
  DenseTensor lhs = contract(sum, 1, b, 0);
  DenseTensor r1 = contract(a, 1, b, 0), r2 = contract(a2, 1, b, 0);
  DenseTensor rhs({2, 2});
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = r1[i] + r2[i];
  CHECK(max_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("matrix chain contraction is associative") {
  Rng rng(14);
  DenseTensor a = random_tensor(rng, {2, 3});
  DenseTensor b = random_tensor(rng, {3, 4});
  DenseTensor c = random_tensor(rng, {4, 2});
  DenseTensor left = contract(contract(a, 1, b, 0), 1, c, 0);
  DenseTensor right = contract(a, 1, contract(b, 1, c, 0), 0);
  CHECK(max_diff(left, right) < 1e-12);
}

TEST_CASE("copy tensors") {
  DenseTensor d1 = copy_tensor(1, 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(d1[i] == cplx{1, 0});
  DenseTensor d2 = copy_tensor(2, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(d2.at({i, j}) == (i == j ? cplx{1, 0} : cplx{0, 0}));
  DenseTensor d3 = copy_tensor(3, 2);
  CHECK(d3.at({0, 0, 0}) == cplx{1, 0});
  CHECK(d3.at({1, 1, 1}) == cplx{1, 0});
  CHECK(d3.at({0, 1, 0}) == cplx{0, 0});
}

TEST_CASE("connected copy tensors fuse into one copy tensor") {
  // contract Delta_m with Delta_k over one edge -> Delta_{m+k-2}
  for (std::size_t d = 1; d <= 4; ++d) {
    for (std::size_t m = 2; m <= 3; ++m)
      for (std::size_t k = 2; k <= 4; ++k) {
        DenseTensor fused = contract(copy_tensor(m, d), m - 1, copy_tensor(k, d), 0);
        DenseTensor expect = copy_tensor(m + k - 2, d);
        REQUIRE(fused.shape() == expect.shape());
        for (std::size_t i = 0; i < fused.size(); ++i)
          CHECK(std::abs(fused[i] - expect[i]) < 1e-15);
      }
  }
}

TEST_CASE("basis vectors and elementwise product") {
  DenseTensor e1 = basis_vector(1, 3);
  CHECK(e1[0] == cplx{0, 0});
  CHECK(e1[1] == cplx{1, 0});
  Rng rng(15);
  DenseTensor a = random_tensor(rng, {2, 2});
  DenseTensor b = random_tensor(rng, {2, 2});
  DenseTensor p = elementwise_product(a, b);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(p[i] - a[i] * b[i]) < 1e-15);
  CHECK_THROWS_AS(elementwise_product(a, random_tensor(rng, {2, 3})), TensorError);
}

TEST_CASE("trace_modes sums the diagonal") {
  DenseTensor t({2, 3, 2});
  Rng rng(16);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = cplx{rng.normal(), 0};
  DenseTensor tr = trace_modes(t, 0, 2);
  for (std::size_t j = 0; j < 3; ++j) {
    cplx s = t.at({0, j, 0}) + t.at({1, j, 1});
    CHECK(std::abs(tr[j] - s) < 1e-15);
  }
}

TEST_CASE("permuted reorders modes") {
  Rng rng(17);
  DenseTensor t = random_tensor(rng, {2, 3, 4});
  DenseTensor p = t.permuted({2, 0, 1});
  CHECK(p.shape() == std::vector<std::size_t>{4, 2, 3});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 4; ++k)
        CHECK(p.at({k, i, j}) == t.at({i, j, k}));
}

TEST_CASE("contract_many with pairings and tensor product of components") {
  Rng rng(18);
  DenseTensor a = random_tensor(rng, {2, 3});
  DenseTensor b = random_tensor(rng, {3, 2});
  std::vector<DenseTensor> ts{a, b};
  std::vector<ModePairing> pair{{0, 1, 1, 0}};
  DenseTensor got = contract_many(ts, pair);
  CHECK(max_diff(got, contract(a, 1, b, 0)) < 1e-12);

  // disconnected tensors combine by tensor product
  std::vector<DenseTensor> free_ts{DenseTensor({2}, {1, 2}),
                                   DenseTensor({2}, {3, 4})};
  DenseTensor tp = contract_many(free_ts, {});
  CHECK(tp.at({0, 1}) == cplx{4, 0});
  CHECK(tp.at({1, 1}) == cplx{8, 0});
}

TEST_CASE("contract_network matches pairwise contraction and handles traces") {
  Rng rng(19);
  DenseTensor a = random_tensor(rng, {2, 3});
  DenseTensor b = random_tensor(rng, {3, 4});
  DenseTensor c = random_tensor(rng, {4, 2});
  std::vector<LabeledTensor> lts{{a, {1, 2}}, {b, {2, 3}}, {c, {3, 4}}};
  std::vector<std::int64_t> out{1, 4};
  DenseTensor got = contract_network(lts, out);
  DenseTensor want = contract(contract(a, 1, b, 0), 1, c, 0);
  CHECK(max_diff(got, want) < 1e-12);

  // repeated label on one tensor is a trace
  DenseTensor sq = random_tensor(rng, {3, 3});
  std::vector<LabeledTensor> tr{{sq, {7, 7}}};
  DenseTensor got_tr = contract_network(tr, {});
  cplx want_tr = sq.at({0, 0}) + sq.at({1, 1}) + sq.at({2, 2});
  CHECK(std::abs(got_tr[0] - want_tr) < 1e-12);
}

TEST_CASE("contract_network output order follows out_labels") {
  Rng rng(20);
  DenseTensor a = random_tensor(rng, {2, 3});
  std::vector<LabeledTensor> lts{{a, {1, 2}}};
  DenseTensor got = contract_network(lts, std::vector<std::int64_t>{2, 1});
  CHECK(max_diff(got, a.permuted({1, 0})) < 1e-15);
}

TEST_CASE("contract_network enforces the size budget") {
  DenseTensor big({100, 100});
  DenseTensor big2({100, 100});
  std::vector<LabeledTensor> lts{{big, {1, 2}}, {big2, {3, 4}}};
  CHECK_THROWS_AS(
      contract_network(lts, std::vector<std::int64_t>{1, 2, 3, 4}, 1000),
      TensorError);
}

TEST_CASE("shape errors are rejected") {
  DenseTensor a({2, 3});
  DenseTensor b({4, 2});
  CHECK_THROWS_AS(contract(a, 1, b, 0), TensorError);
  CHECK_THROWS_AS(contract(a, 5, b, 0), TensorError);
  CHECK_THROWS_AS(DenseTensor({2, 2}, std::vector<cplx>(3)), TensorError);
}
