#include "entprobe/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace entprobe {

namespace {

std::size_t shape_size(const shape_t& shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) n *= e;
  return n;
}

std::vector<std::size_t> row_major_strides(const shape_t& shape) {
  std::vector<std::size_t> strides(shape.size(), 1);
  for (std::size_t k = shape.size(); k-- > 1;) {
    strides[k - 1] = strides[k] * shape[k];
  }
  return strides;
}

using RowMajorMatrix = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

DenseTensor::DenseTensor(shape_t shape)
    : shape_(std::move(shape)), data_(shape_size(shape_), cd(0.0, 0.0)) {}

DenseTensor::DenseTensor(shape_t shape, std::vector<cd> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_size(shape_)) {
    throw dimension_error("DenseTensor: data size does not match shape");
  }
}

std::size_t DenseTensor::flat_index(const std::vector<std::size_t>& idx) const {
  if (idx.size() != shape_.size()) {
    throw dimension_error("DenseTensor: index rank mismatch");
  }
  std::size_t flat = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= shape_[k]) throw dimension_error("DenseTensor: index out of range");
    flat = flat * shape_[k] + idx[k];
  }
  return flat;
}

DenseTensor DenseTensor::permuted(const std::vector<std::size_t>& order) const {
  if (order.size() != rank()) throw std::invalid_argument("permuted: order rank mismatch");
  std::vector<bool> seen(rank(), false);
  shape_t new_shape(rank());
  for (std::size_t k = 0; k < rank(); ++k) {
    if (order[k] >= rank() || seen[order[k]]) {
      throw std::invalid_argument("permuted: order is not a permutation");
    }
    seen[order[k]] = true;
    new_shape[k] = shape_[order[k]];
  }

  DenseTensor out(new_shape);
  if (size() == 0) return out;
  if (rank() == 0) {
    out.data_ = data_;
    return out;
  }
  const auto src_strides = row_major_strides(shape_);

  // Walk the destination in linear order, tracking the source offset.
  std::vector<std::size_t> idx(rank(), 0);
  std::size_t src = 0;
  std::vector<std::size_t> strides_in_dest(rank());
  for (std::size_t k = 0; k < rank(); ++k) strides_in_dest[k] = src_strides[order[k]];
  for (std::size_t dst = 0;; ++dst) {
    out.data_[dst] = data_[src];
    std::size_t k = rank();
    while (k-- > 0) {
      idx[k]++;
      src += strides_in_dest[k];
      if (idx[k] < new_shape[k]) break;
      src -= idx[k] * strides_in_dest[k];
      idx[k] = 0;
      if (k == 0) return out;
    }
  }
}

DenseTensor DenseTensor::reshaped(shape_t shape) const {
  if (shape_size(shape) != size()) throw dimension_error("reshaped: size mismatch");
  return DenseTensor(std::move(shape), data_);
}

DenseTensor DenseTensor::conjugated() const {
  DenseTensor out = *this;
  for (cd& z : out.data_) z = std::conj(z);
  return out;
}

DenseTensor& DenseTensor::scale(cd factor) {
  for (cd& z : data_) z *= factor;
  return *this;
}

double DenseTensor::norm() const {
  double acc = 0.0;
  for (const cd& z : data_) acc += std::norm(z);
  return std::sqrt(acc);
}

bool DenseTensor::all_finite() const {
  for (const cd& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<bool> a_paired(a.rank(), false), b_paired(b.rank(), false);
  std::size_t contracted = 1;
  for (const auto& [ia, ib] : pairs) {
    if (ia >= a.rank() || ib >= b.rank()) {
      throw std::invalid_argument("contract: axis out of range");
    }
    if (a_paired[ia] || b_paired[ib]) {
      throw std::invalid_argument("contract: axis paired twice");
    }
    if (a.extent(ia) != b.extent(ib)) {
      std::ostringstream msg;
      msg << "contract: extent mismatch on pair (" << ia << "," << ib << "): "
          << a.extent(ia) << " vs " << b.extent(ib);
      throw dimension_error(msg.str());
    }
    a_paired[ia] = true;
    b_paired[ib] = true;
    contracted *= a.extent(ia);
  }

  std::vector<std::size_t> a_order, b_order;
  shape_t out_shape;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (!a_paired[k]) {
      a_order.push_back(k);
      out_shape.push_back(a.extent(k));
    }
  }
  for (const auto& p : pairs) a_order.push_back(p.first);
  for (const auto& p : pairs) b_order.push_back(p.second);
  for (std::size_t k = 0; k < b.rank(); ++k) {
    if (!b_paired[k]) {
      b_order.push_back(k);
      out_shape.push_back(b.extent(k));
    }
  }

  const DenseTensor ap = a.permuted(a_order);
  const DenseTensor bp = b.permuted(b_order);
  const std::size_t rows = a.size() / contracted;
  const std::size_t cols = b.size() / contracted;

  Eigen::Map<const RowMajorMatrix> ma(ap.data().data(), rows, contracted);
  Eigen::Map<const RowMajorMatrix> mb(bp.data().data(), contracted, cols);
  RowMajorMatrix mc = ma * mb;

  DenseTensor out(out_shape);
  std::copy(mc.data(), mc.data() + mc.size(), out.data().begin());
  return out;
}

Eigen::MatrixXcd tensor_as_matrix(const DenseTensor& t, std::size_t row_axes) {
  if (row_axes > t.rank()) throw std::invalid_argument("tensor_as_matrix: bad split");
  std::size_t rows = 1, cols = 1;
  for (std::size_t k = 0; k < t.rank(); ++k) {
    (k < row_axes ? rows : cols) *= t.extent(k);
  }
  return Eigen::Map<const RowMajorMatrix>(t.data().data(), rows, cols);
}

DenseTensor matrix_as_tensor(const Eigen::MatrixXcd& m, shape_t shape) {
  DenseTensor out(std::move(shape));
  if (static_cast<std::size_t>(m.size()) != out.size()) {
    throw dimension_error("matrix_as_tensor: size mismatch");
  }
  Eigen::Map<RowMajorMatrix>(out.data().data(), m.rows(), m.cols()) = m;
  return out;
}

Eigen::VectorXcd tensor_as_vector(const DenseTensor& t) {
  return Eigen::Map<const Eigen::VectorXcd>(t.data().data(), static_cast<Eigen::Index>(t.size()));
}

DenseTensor vector_as_tensor(const Eigen::VectorXcd& v, shape_t shape) {
  DenseTensor out(std::move(shape));
  if (static_cast<std::size_t>(v.size()) != out.size()) {
    throw dimension_error("vector_as_tensor: size mismatch");
  }
  std::copy(v.data(), v.data() + v.size(), out.data().begin());
  return out;
}

SvdSplit svd_split(const DenseTensor& t, std::size_t row_axes, std::size_t max_rank,
                   double cutoff) {
  if (max_rank < 1) throw std::invalid_argument("svd_split: max_rank must be >= 1");
  if (cutoff < 0.0) throw std::invalid_argument("svd_split: cutoff must be >= 0");
  if (row_axes == 0 || row_axes >= t.rank()) {
    throw std::invalid_argument("svd_split: bipartition must leave axes on both sides");
  }
  if (!t.all_finite()) throw numeric_error("svd_split: non-finite input");

  const Eigen::MatrixXcd m = tensor_as_matrix(t, row_axes);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();

  std::size_t keep = 0;
  const double threshold = s.size() > 0 ? cutoff * s(0) : 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) >= threshold) ++keep;
  }
  keep = std::clamp<std::size_t>(keep, 1, std::min<std::size_t>(max_rank, s.size()));

  double discarded = 0.0;
  for (Eigen::Index k = static_cast<Eigen::Index>(keep); k < s.size(); ++k) {
    discarded += s(k) * s(k);
  }

  shape_t u_shape(t.shape().begin(), t.shape().begin() + row_axes);
  u_shape.push_back(keep);
  shape_t v_shape{keep};
  v_shape.insert(v_shape.end(), t.shape().begin() + row_axes, t.shape().end());

  SvdSplit out;
  out.u = matrix_as_tensor(svd.matrixU().leftCols(keep), std::move(u_shape));
  out.singular_values = s.head(keep);
  out.v = matrix_as_tensor(svd.matrixV().leftCols(keep).adjoint(), std::move(v_shape));
  out.discarded_weight = discarded;
  return out;
}

EigPair eigh_smallest(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigh_smallest: matrix not square");
  if (!h.allFinite()) throw numeric_error("eigh_smallest: non-finite input");

  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double deviation = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (deviation > 1e-10 * scale) {
    throw std::invalid_argument("eigh_smallest: matrix not Hermitian within tolerance");
  }

  const Eigen::MatrixXcd sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw numeric_error("eigh_smallest: eigensolver failed");
  }
  return EigPair{solver.eigenvalues()(0), solver.eigenvectors().col(0)};
}

EigPair eigh_smallest(const DenseTensor& h) {
  if (h.rank() != 2) throw std::invalid_argument("eigh_smallest: rank-2 tensor required");
  return eigh_smallest(tensor_as_matrix(h, 1));
}

EigPair lanczos_smallest(const LinearMap& apply, Eigen::Index n, double tol, int max_iter,
                         const Eigen::VectorXcd* guess) {
  if (n < 1) throw std::invalid_argument("lanczos_smallest: dimension must be >= 1");

  if (n <= 512) {
    Eigen::MatrixXcd dense(n, n);
    Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd column(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      basis(j) = cd(1.0, 0.0);
      apply(basis, column);
      dense.col(j) = column;
      basis(j) = cd(0.0, 0.0);
    }
    return eigh_smallest(dense);
  }

  Eigen::VectorXcd v;
  if (guess != nullptr && guess->size() == n && guess->norm() > 1e-14) {
    v = *guess / guess->norm();
  } else {
    std::mt19937_64 rng(0x5eed5eedULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    v.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) v(k) = cd(gauss(rng), gauss(rng));
    v /= v.norm();
  }

  // Restarted Lanczos with full reorthogonalization; the Krylov basis is
  // capped to bound memory, restarting from the best Ritz vector.
  const int basis_cap = std::min<int>({max_iter, static_cast<int>(n), 120});
  Eigen::MatrixXcd basis(n, basis_cap);
  Eigen::VectorXcd w(n);

  double best_value = 0.0;
  Eigen::VectorXcd best_vector = v;
  int total_iters = 0;

  while (total_iters < max_iter) {
    std::vector<double> alphas, betas;
    basis.col(0) = v;
    for (int k = 0; k < basis_cap && total_iters < max_iter; ++k, ++total_iters) {
      apply(basis.col(k), w);
      if (!w.allFinite()) throw numeric_error("lanczos_smallest: non-finite map output");
      alphas.push_back(std::real(basis.col(k).dot(w)));

      // Full reorthogonalization, twice for stability.
      for (int pass = 0; pass < 2; ++pass) {
        w.noalias() -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
      }
      const double beta = w.norm();

      // Ritz pair of the current tridiagonal projection.
      const int dim = k + 1;
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) tri(i, i) = alphas[i];
      for (int i = 0; i + 1 < dim; ++i) tri(i, i + 1) = tri(i + 1, i) = betas[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
      const double theta = small.eigenvalues()(0);
      const Eigen::VectorXd y = small.eigenvectors().col(0);

      best_value = theta;
      best_vector.noalias() = basis.leftCols(dim) * y.cast<cd>();
      best_vector /= best_vector.norm();

      const double residual = beta * std::abs(y(dim - 1));
      if (residual <= tol * std::max(1.0, std::abs(theta))) {
        return EigPair{best_value, best_vector};
      }
      if (beta < 1e-14) {
        // Krylov space exhausted: the Ritz pair is exact.
        return EigPair{best_value, best_vector};
      }
      if (k + 1 < basis_cap) {
        betas.push_back(beta);
        basis.col(k + 1) = w / beta;
      }
    }
    v = best_vector;
  }

  std::vector<cd> best(best_vector.data(), best_vector.data() + best_vector.size());
  throw convergence_error("lanczos_smallest: no convergence after max_iter", best_value,
                          std::move(best));
}

}  // namespace entprobe
