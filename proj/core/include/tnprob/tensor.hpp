#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tnprob {

using cplx = std::complex<double>;

struct TensorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense n-mode array of complex doubles, row-major, immutable by convention
/// after construction (all operations below return new values).
class DenseTensor {
 public:
  DenseTensor() : shape_{}, data_(1, cplx{0.0, 0.0}) {}  // 0-tensor holding 0
  explicit DenseTensor(std::vector<std::size_t> shape);
  DenseTensor(std::vector<std::size_t> shape, std::vector<cplx> data);

  static DenseTensor scalar(cplx v);
  static DenseTensor from_real(std::vector<std::size_t> shape,
                               const std::vector<double>& data);

  std::size_t order() const { return shape_.size(); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  std::size_t dim(std::size_t mode) const;

  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& mutable_data() { return data_; }

  cplx operator[](std::size_t linear) const { return data_[linear]; }
  cplx& operator[](std::size_t linear) { return data_[linear]; }

  /// Element access by zero-based multi-index.
  cplx at(std::span<const std::size_t> idx) const;
  cplx at(std::initializer_list<std::size_t> idx) const;
  void set(std::span<const std::size_t> idx, cplx v);
  void set(std::initializer_list<std::size_t> idx, cplx v);

  /// Row-major strides for the current shape.
  std::vector<std::size_t> strides() const;

  /// New tensor with modes reordered so that output mode i is input mode
  /// perm[i].
  DenseTensor permuted(std::span<const std::size_t> perm) const;
  DenseTensor permuted(std::initializer_list<std::size_t> perm) const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<cplx> data_;
};

/// Contraction of mode k of a with mode k2 of b (zero-based). Output modes
/// are a's modes with k removed followed by b's modes with k2 removed.
DenseTensor contract(const DenseTensor& a, std::size_t k, const DenseTensor& b,
                     std::size_t k2);

/// Contraction over several mode pairs at once; ka[i] pairs with kb[i].
DenseTensor contract_multi(const DenseTensor& a, std::span<const std::size_t> ka,
                           const DenseTensor& b, std::span<const std::size_t> kb);

DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b);

/// Delta_n of dimension d: 1 where all n indices agree, 0 elsewhere. n = 1
/// gives the all-ones vector, n = 2 the identity matrix.
DenseTensor copy_tensor(std::size_t n, std::size_t d);

/// Basis vector e_x (zero-based x) of dimension d.
DenseTensor basis_vector(std::size_t x, std::size_t d);

DenseTensor elementwise_product(const DenseTensor& a, const DenseTensor& b);
DenseTensor conjugate(const DenseTensor& a);
double norm2(const DenseTensor& a);

/// Sum of the diagonal over modes k1 < k2, removing both modes.
DenseTensor trace_modes(const DenseTensor& a, std::size_t k1, std::size_t k2);

/// One mode pairing for contract_many: mode am of tensor ai meets mode bm of
/// tensor bi. ai == bi performs a trace.
struct ModePairing {
  std::size_t a_tensor, a_mode;
  std::size_t b_tensor, b_mode;
};

/// Performs all pairings; the result is independent of internal order.
/// Unpaired modes appear in (tensor index, mode index) order. Disconnected
/// pairing components combine by tensor product.
DenseTensor contract_many(std::span<const DenseTensor> tensors,
                          std::span<const ModePairing> pairings);

/// A tensor together with integer mode labels, input to contract_network.
struct LabeledTensor {
  DenseTensor tensor;
  std::vector<std::int64_t> labels;
};

/// General label-based contraction. Every label must occur at most twice in
/// total; labels occurring twice are summed over, labels occurring once must
/// be listed in out_labels, whose order fixes the output mode order.
/// Contraction order is chosen greedily by smallest intermediate size, with
/// ties broken by tensor position. Throws TensorError when an intermediate
/// would exceed budget elements.
DenseTensor contract_network(std::vector<LabeledTensor> tensors,
                             std::span<const std::int64_t> out_labels,
                             std::size_t budget = 100'000'000);

}  // namespace tnprob
