#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "entprobe/errors.hpp"

namespace entprobe {

using cd = std::complex<double>;
using shape_t = std::vector<std::size_t>;

/// Dense complex tensor with row-major (C order) linearization: the LAST
/// axis is fastest, i.e. flat index of (i0, i1, ..., ik) is
/// ((i0 * e1 + i1) * e2 + ...) + ik. This order is fixed project-wide; all
/// reshapes and matrix views below assume it.
class DenseTensor {
public:
  DenseTensor() = default;

  /// Zero-filled tensor of the given shape. Rank 0 (empty shape) is a scalar
  /// holding one entry.
  explicit DenseTensor(shape_t shape);

  DenseTensor(shape_t shape, std::vector<cd> data);

  std::size_t rank() const { return shape_.size(); }
  std::size_t extent(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }
  const shape_t& shape() const { return shape_; }

  std::vector<cd>& data() { return data_; }
  const std::vector<cd>& data() const { return data_; }

  cd& operator[](std::size_t flat) { return data_[flat]; }
  const cd& operator[](std::size_t flat) const { return data_[flat]; }

  std::size_t flat_index(const std::vector<std::size_t>& idx) const;
  cd at(const std::vector<std::size_t>& idx) const { return data_[flat_index(idx)]; }
  void set(const std::vector<std::size_t>& idx, cd value) { data_[flat_index(idx)] = value; }

  /// New tensor whose axis k is the source axis order[k].
  DenseTensor permuted(const std::vector<std::size_t>& order) const;

  /// Same data, new shape (sizes must agree).
  DenseTensor reshaped(shape_t shape) const;

  DenseTensor conjugated() const;
  DenseTensor& scale(cd factor);

  double norm() const;  // Frobenius
  bool all_finite() const;

private:
  shape_t shape_;
  std::vector<cd> data_;
};

/// Pairwise tensor contraction. Each pair (i, j) sums axis i of `a` against
/// axis j of `b`; the result carries the unpaired axes of `a` followed by
/// the unpaired axes of `b`, both in their original order.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

/// View the first `row_axes` axes as matrix rows and the rest as columns.
Eigen::MatrixXcd tensor_as_matrix(const DenseTensor& t, std::size_t row_axes);
DenseTensor matrix_as_tensor(const Eigen::MatrixXcd& m, shape_t shape);

Eigen::VectorXcd tensor_as_vector(const DenseTensor& t);
DenseTensor vector_as_tensor(const Eigen::VectorXcd& v, shape_t shape);

struct SvdSplit {
  DenseTensor u;                    // row axes + {rank}
  Eigen::VectorXd singular_values;  // descending
  DenseTensor v;                    // {rank} + column axes
  double discarded_weight = 0.0;    // sum of squared discarded singular values
};

/// Truncated SVD of `t` viewed as a matrix across the axis bipartition
/// (first `row_axes` axes | rest). Keeps
///   r = clamp(#{k : s_k >= cutoff * s_0}, 1, max_rank)
/// singular values. Ties between equal singular values keep the earlier
/// index (LAPACK order is already deterministic and descending).
SvdSplit svd_split(const DenseTensor& t, std::size_t row_axes, std::size_t max_rank,
                   double cutoff);

struct EigPair {
  double value = 0.0;
  Eigen::VectorXcd vector;
};

/// Smallest eigenpair of a Hermitian matrix. The input is symmetrized as
/// (h + h^dag)/2 to absorb contraction round-off; deviations beyond 1e-10
/// (relative to the largest entry) are rejected.
EigPair eigh_smallest(const Eigen::MatrixXcd& h);
EigPair eigh_smallest(const DenseTensor& h);

using LinearMap = std::function<void(const Eigen::VectorXcd& in, Eigen::VectorXcd& out)>;

/// Smallest eigenpair of a Hermitian linear map. Falls back to a dense
/// solve (materializing the map column by column) for n <= 512; otherwise
/// runs Lanczos with full reorthogonalization. Throws convergence_error
/// carrying the best Ritz pair if max_iter is exhausted.
EigPair lanczos_smallest(const LinearMap& apply, Eigen::Index n, double tol, int max_iter,
                         const Eigen::VectorXcd* guess = nullptr);

}  // namespace entprobe
