#include "tnprob/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace tnprob {

namespace {

std::size_t checked_size(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) {
    if (d == 0) throw TensorError("zero mode dimension");
    if (d != 0 && n > std::numeric_limits<std::size_t>::max() / d)
      throw TensorError("tensor size overflow");
    n *= d;
  }
  return n;
}

using CMat =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

DenseTensor::DenseTensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(checked_size(shape_), cplx{0.0, 0.0}) {}

DenseTensor::DenseTensor(std::vector<std::size_t> shape, std::vector<cplx> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != checked_size(shape_))
    throw TensorError("element count does not match shape");
}

DenseTensor DenseTensor::scalar(cplx v) {
  DenseTensor t;
  t.data_[0] = v;
  return t;
}

DenseTensor DenseTensor::from_real(std::vector<std::size_t> shape,
                                   const std::vector<double>& data) {
  std::vector<cplx> c(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) c[i] = cplx{data[i], 0.0};
  return DenseTensor(std::move(shape), std::move(c));
}

std::size_t DenseTensor::dim(std::size_t mode) const {
  if (mode >= shape_.size()) throw TensorError("mode index out of range");
  return shape_[mode];
}

std::vector<std::size_t> DenseTensor::strides() const {
  std::vector<std::size_t> s(shape_.size(), 1);
  for (std::size_t i = shape_.size(); i-- > 1;) s[i - 1] = s[i] * shape_[i];
  return s;
}

cplx DenseTensor::at(std::span<const std::size_t> idx) const {
  if (idx.size() != shape_.size()) throw TensorError("index arity mismatch");
  std::size_t lin = 0, stride = 1;
  for (std::size_t i = shape_.size(); i-- > 0;) {
    if (idx[i] >= shape_[i]) throw TensorError("index out of range");
    lin += idx[i] * stride;
    stride *= shape_[i];
  }
  return data_[lin];
}

cplx DenseTensor::at(std::initializer_list<std::size_t> idx) const {
  std::vector<std::size_t> v(idx);
  return at(std::span<const std::size_t>(v));
}

void DenseTensor::set(std::span<const std::size_t> idx, cplx v) {
  std::size_t lin = 0, stride = 1;
  if (idx.size() != shape_.size()) throw TensorError("index arity mismatch");
  for (std::size_t i = shape_.size(); i-- > 0;) {
    if (idx[i] >= shape_[i]) throw TensorError("index out of range");
    lin += idx[i] * stride;
    stride *= shape_[i];
  }
  data_[lin] = v;
}

void DenseTensor::set(std::initializer_list<std::size_t> idx, cplx v) {
  std::vector<std::size_t> vi(idx);
  set(std::span<const std::size_t>(vi), v);
}

DenseTensor DenseTensor::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != shape_.size()) throw TensorError("permutation arity mismatch");
  std::vector<bool> seen(perm.size(), false);
  std::vector<std::size_t> new_shape(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] >= perm.size() || seen[perm[i]])
      throw TensorError("invalid permutation");
    seen[perm[i]] = true;
    new_shape[i] = shape_[perm[i]];
  }
  DenseTensor out(new_shape);
  const auto in_strides = strides();
  std::vector<std::size_t> out_strides_of_in(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i)
    out_strides_of_in[i] = in_strides[perm[i]];
  // Walk the output linearly, tracking the matching input offset.
  std::vector<std::size_t> idx(perm.size(), 0);
  std::size_t in_lin = 0;
  for (std::size_t o = 0; o < out.size(); ++o) {
    out.data_[o] = data_[in_lin];
    for (std::size_t i = perm.size(); i-- > 0;) {
      idx[i]++;
      in_lin += out_strides_of_in[i];
      if (idx[i] < new_shape[i]) break;
      in_lin -= idx[i] * out_strides_of_in[i];
      idx[i] = 0;
    }
  }
  return out;
}

DenseTensor DenseTensor::permuted(std::initializer_list<std::size_t> perm) const {
  std::vector<std::size_t> p(perm);
  return permuted(std::span<const std::size_t>(p));
}

DenseTensor contract(const DenseTensor& a, std::size_t k, const DenseTensor& b,
                     std::size_t k2) {
  const std::size_t ka[] = {k};
  const std::size_t kb[] = {k2};
  return contract_multi(a, ka, b, kb);
}

DenseTensor contract_multi(const DenseTensor& a, std::span<const std::size_t> ka,
                           const DenseTensor& b,
                           std::span<const std::size_t> kb) {
  if (ka.size() != kb.size()) throw TensorError("pairing arity mismatch");
  std::vector<bool> a_used(a.order(), false), b_used(b.order(), false);
  std::size_t shared = 1;
  for (std::size_t i = 0; i < ka.size(); ++i) {
    if (ka[i] >= a.order() || kb[i] >= b.order())
      throw TensorError("mode index out of range");
    if (a_used[ka[i]] || b_used[kb[i]]) throw TensorError("repeated mode in pairing");
    if (a.dim(ka[i]) != b.dim(kb[i])) {
      std::ostringstream os;
      os << "dimension mismatch: mode " << ka[i] << " of a has dim "
         << a.dim(ka[i]) << ", mode " << kb[i] << " of b has dim "
         << b.dim(kb[i]);
      throw TensorError(os.str());
    }
    a_used[ka[i]] = true;
    b_used[kb[i]] = true;
    shared *= a.dim(ka[i]);
  }
  // Permute a -> (free..., shared...) and b -> (shared..., free...), then a
  // single matrix product gives the contraction.
  std::vector<std::size_t> pa, pb;
  std::vector<std::size_t> out_shape;
  for (std::size_t i = 0; i < a.order(); ++i)
    if (!a_used[i]) {
      pa.push_back(i);
      out_shape.push_back(a.dim(i));
    }
  for (std::size_t i : ka) pa.push_back(i);
  for (std::size_t i : kb) pb.push_back(i);
  for (std::size_t i = 0; i < b.order(); ++i)
    if (!b_used[i]) {
      pb.push_back(i);
      out_shape.push_back(b.dim(i));
    }
  DenseTensor ap = a.permuted(std::span<const std::size_t>(pa));
  DenseTensor bp = b.permuted(std::span<const std::size_t>(pb));
  const std::size_t m = a.size() / shared;
  const std::size_t n = b.size() / shared;
  DenseTensor out(out_shape);
  Eigen::Map<const CMat> ma(ap.data().data(), static_cast<Eigen::Index>(m),
                            static_cast<Eigen::Index>(shared));
  Eigen::Map<const CMat> mb(bp.data().data(), static_cast<Eigen::Index>(shared),
                            static_cast<Eigen::Index>(n));
  Eigen::Map<CMat> mo(out.mutable_data().data(), static_cast<Eigen::Index>(m),
                      static_cast<Eigen::Index>(n));
  mo.noalias() = ma * mb;
  return out;
}

DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b) {
  std::vector<std::size_t> shape = a.shape();
  shape.insert(shape.end(), b.shape().begin(), b.shape().end());
  std::vector<cplx> data(a.size() * b.size());
  std::size_t o = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) data[o++] = a[i] * b[j];
  return DenseTensor(std::move(shape), std::move(data));
}

DenseTensor copy_tensor(std::size_t n, std::size_t d) {
  if (n == 0) throw TensorError("copy tensor order must be >= 1");
  if (d == 0) throw TensorError("copy tensor dimension must be >= 1");
  DenseTensor t(std::vector<std::size_t>(n, d));
  // Linear index of (x, x, ..., x) is x * (d^{n-1} + ... + d + 1).
  std::size_t step = 0, p = 1;
  for (std::size_t i = 0; i < n; ++i) {
    step += p;
    p *= d;
  }
  for (std::size_t x = 0; x < d; ++x) t[x * step] = cplx{1.0, 0.0};
  return t;
}

DenseTensor basis_vector(std::size_t x, std::size_t d) {
  if (x >= d) throw TensorError("basis index out of range");
  DenseTensor t(std::vector<std::size_t>{d});
  t[x] = cplx{1.0, 0.0};
  return t;
}

DenseTensor elementwise_product(const DenseTensor& a, const DenseTensor& b) {
  if (a.shape() != b.shape()) throw TensorError("shape mismatch");
  DenseTensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

DenseTensor conjugate(const DenseTensor& a) {
  DenseTensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::conj(a[i]);
  return out;
}

double norm2(const DenseTensor& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i]);
  return std::sqrt(s);
}

DenseTensor trace_modes(const DenseTensor& a, std::size_t k1, std::size_t k2) {
  if (k1 >= a.order() || k2 >= a.order() || k1 == k2)
    throw TensorError("invalid trace modes");
  if (k1 > k2) std::swap(k1, k2);
  if (a.dim(k1) != a.dim(k2)) throw TensorError("trace dimension mismatch");
  std::vector<std::size_t> out_shape;
  std::vector<std::size_t> perm;  // (free..., k1, k2)
  for (std::size_t i = 0; i < a.order(); ++i)
    if (i != k1 && i != k2) {
      out_shape.push_back(a.dim(i));
      perm.push_back(i);
    }
  perm.push_back(k1);
  perm.push_back(k2);
  DenseTensor ap = a.permuted(std::span<const std::size_t>(perm));
  const std::size_t d = a.dim(k1);
  DenseTensor out(out_shape);
  for (std::size_t f = 0; f < out.size(); ++f) {
    cplx s{0.0, 0.0};
    for (std::size_t x = 0; x < d; ++x) s += ap[f * d * d + x * d + x];
    out[f] = s;
  }
  return out;
}

namespace {

// Contract two labeled tensors over all labels they share.
LabeledTensor contract_pair(const LabeledTensor& a, const LabeledTensor& b) {
  std::vector<std::size_t> ka, kb;
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    for (std::size_t j = 0; j < b.labels.size(); ++j) {
      if (a.labels[i] == b.labels[j]) {
        ka.push_back(i);
        kb.push_back(j);
      }
    }
  }
  LabeledTensor out;
  if (ka.empty()) {
    out.tensor = tensor_product(a.tensor, b.tensor);
    out.labels = a.labels;
    out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
    return out;
  }
  out.tensor = contract_multi(a.tensor, ka, b.tensor, kb);
  std::vector<bool> a_used(a.labels.size(), false), b_used(b.labels.size(), false);
  for (std::size_t i : ka) a_used[i] = true;
  for (std::size_t j : kb) b_used[j] = true;
  for (std::size_t i = 0; i < a.labels.size(); ++i)
    if (!a_used[i]) out.labels.push_back(a.labels[i]);
  for (std::size_t j = 0; j < b.labels.size(); ++j)
    if (!b_used[j]) out.labels.push_back(b.labels[j]);
  return out;
}

// Resolve labels appearing twice on the same tensor by tracing.
void resolve_self_labels(LabeledTensor& t) {
  for (;;) {
    bool traced = false;
    for (std::size_t i = 0; i < t.labels.size() && !traced; ++i) {
      for (std::size_t j = i + 1; j < t.labels.size() && !traced; ++j) {
        if (t.labels[i] == t.labels[j]) {
          t.tensor = trace_modes(t.tensor, i, j);
          std::vector<std::int64_t> nl;
          for (std::size_t k = 0; k < t.labels.size(); ++k)
            if (k != i && k != j) nl.push_back(t.labels[k]);
          t.labels = std::move(nl);
          traced = true;
        }
      }
    }
    if (!traced) return;
  }
}

std::size_t pair_result_size(const LabeledTensor& a, const LabeledTensor& b) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    bool shared = false;
    for (auto l : b.labels) shared = shared || l == a.labels[i];
    if (!shared) n *= a.tensor.dim(i);
  }
  for (std::size_t j = 0; j < b.labels.size(); ++j) {
    bool shared = false;
    for (auto l : a.labels) shared = shared || l == b.labels[j];
    if (!shared) n *= b.tensor.dim(j);
  }
  return n;
}

bool share_label(const LabeledTensor& a, const LabeledTensor& b) {
  for (auto la : a.labels)
    for (auto lb : b.labels)
      if (la == lb) return true;
  return false;
}

}  // namespace

DenseTensor contract_network(std::vector<LabeledTensor> tensors,
                             std::span<const std::int64_t> out_labels,
                             std::size_t budget) {
  if (tensors.empty()) return DenseTensor::scalar(cplx{1.0, 0.0});
  for (auto& t : tensors) {
    if (t.labels.size() != t.tensor.order())
      throw TensorError("label arity does not match tensor order");
    resolve_self_labels(t);
  }
  // Greedy: among connected pairs, repeatedly contract the one with the
  // smallest result; disconnected leftovers combine by tensor product.
  while (tensors.size() > 1) {
    std::size_t best_i = 0, best_j = 0, best_size = 0;
    bool found = false;
    for (std::size_t i = 0; i < tensors.size(); ++i) {
      for (std::size_t j = i + 1; j < tensors.size(); ++j) {
        if (!share_label(tensors[i], tensors[j])) continue;
        std::size_t s = pair_result_size(tensors[i], tensors[j]);
        if (!found || s < best_size) {
          found = true;
          best_i = i;
          best_j = j;
          best_size = s;
        }
      }
    }
    if (!found) {  // fully disconnected: product of the first two
      best_i = 0;
      best_j = 1;
      best_size = pair_result_size(tensors[0], tensors[1]);
    }
    if (best_size > budget) {
      std::ostringstream os;
      os << "contraction intermediate of " << best_size
         << " elements exceeds budget " << budget;
      throw TensorError(os.str());
    }
    LabeledTensor merged = contract_pair(tensors[best_i], tensors[best_j]);
    resolve_self_labels(merged);
    tensors.erase(tensors.begin() + static_cast<std::ptrdiff_t>(best_j));
    tensors[best_i] = std::move(merged);
  }
  LabeledTensor& r = tensors[0];
  if (r.labels.size() != out_labels.size())
    throw TensorError("free labels do not match requested output labels");
  std::vector<std::size_t> perm(out_labels.size());
  for (std::size_t i = 0; i < out_labels.size(); ++i) {
    bool ok = false;
    for (std::size_t j = 0; j < r.labels.size(); ++j) {
      if (r.labels[j] == out_labels[i]) {
        perm[i] = j;
        ok = true;
        break;
      }
    }
    if (!ok) throw TensorError("output label missing from contraction result");
  }
  return r.tensor.permuted(std::span<const std::size_t>(perm));
}

DenseTensor contract_many(std::span<const DenseTensor> tensors,
                          std::span<const ModePairing> pairings) {
  std::vector<LabeledTensor> lts(tensors.size());
  std::int64_t next = 0;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    lts[i].tensor = tensors[i];
    for (std::size_t m = 0; m < tensors[i].order(); ++m)
      lts[i].labels.push_back(next++);
  }
  std::vector<bool> paired;
  paired.assign(static_cast<std::size_t>(next), false);
  auto flat = [&](std::size_t t, std::size_t m) {
    if (t >= tensors.size() || m >= tensors[t].order())
      throw TensorError("pairing references unknown tensor mode");
    std::size_t base = 0;
    for (std::size_t i = 0; i < t; ++i) base += tensors[i].order();
    return base + m;
  };
  for (const auto& p : pairings) {
    std::size_t fa = flat(p.a_tensor, p.a_mode);
    std::size_t fb = flat(p.b_tensor, p.b_mode);
    if (fa == fb) throw TensorError("pairing of a mode with itself");
    if (paired[fa] || paired[fb]) throw TensorError("repeated mode in pairings");
    if (tensors[p.a_tensor].dim(p.a_mode) != tensors[p.b_tensor].dim(p.b_mode))
      throw TensorError("dimension mismatch in pairing");
    paired[fa] = true;
    paired[fb] = true;
    lts[p.b_tensor].labels[p.b_mode] = lts[p.a_tensor].labels[p.a_mode];
  }
  std::vector<std::int64_t> out;
  std::size_t f = 0;
  for (std::size_t i = 0; i < tensors.size(); ++i)
    for (std::size_t m = 0; m < tensors[i].order(); ++m, ++f)
      if (!paired[f]) out.push_back(lts[i].labels[m]);
  return contract_network(std::move(lts), out);
}

}  // namespace tnprob
