#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "entprobe/tensor.hpp"

namespace entprobe {

/// Pure chain state as a train of rank-3 site tensors with axes
/// (left bond, physical d=2, right bond). `center` is the orthogonality
/// center when the state is in mixed-canonical form.
struct MatrixProductState {
  std::vector<DenseTensor> sites;
  std::optional<int> center;

  int length() const { return static_cast<int>(sites.size()); }
  std::size_t bond_dim(int bond) const;  // bond k sits between sites k-1 and k
  std::size_t max_bond_dim() const;

  /// Throws if bond extents are inconsistent or boundary bonds are not 1.
  void validate() const;
};

/// Chain operator as a train of rank-4 site tensors with axes
/// (left bond, physical out, physical in, right bond).
struct MatrixProductOperator {
  std::vector<DenseTensor> sites;

  int length() const { return static_cast<int>(sites.size()); }
  void validate() const;
};

/// Transverse-field Ising chain
///   H = -sum_i J_{i,i+1} sz_i sz_{i+1} - g sum_i sx_i
/// with open boundaries. Couplings are indexed by the 1-based left site of
/// each bond, i = 1..N-1, so a Gaussian profile centered at x_a peaks at
/// the bond whose left site is x_a.
struct IsingChainSpec {
  struct Uniform {
    double j = 1.0;
  };
  struct DoubleGaussian {
    double xa, a, xb, b;
  };

  int n_sites;
  double g;
  std::variant<Uniform, DoubleGaussian> coupling = Uniform{1.0};

  /// J_{i,i+1} for 1-based bond index i in [1, N-1].
  double coupling_at(int bond) const;
  void validate() const;
};

/// (|0...0> + |1...1>)/sqrt(2) with all internal bonds of extent 2.
MatrixProductState make_ghz(int n);

/// Product state from per-site unit vectors; every bond has extent 1.
MatrixProductState make_product(const std::vector<Eigen::Vector2cd>& locals);

/// Seeded random state: a random product state plus bond-2 Gaussian noise,
/// canonicalized (and therefore normalized) at site 0.
MatrixProductState random_mps(int n, std::uint64_t seed, double noise = 0.2);

/// Gauge-fix so that sites left of `center` are left isometries and sites
/// right of it are right isometries; the result has unit norm.
MatrixProductState canonicalize(const MatrixProductState& psi, int center);

/// <psi|phi>.
cd overlap(const MatrixProductState& psi, const MatrixProductState& phi);

/// <psi|op|psi> for a Hermitian operator (imaginary residual asserted
/// against 1e-10 and discarded).
double expectation_mpo(const MatrixProductState& psi, const MatrixProductOperator& op);

/// Partial trace of |psi><psi| down to a contiguous window of
/// `window_len <= 6` sites starting at 0-based `window_start`.
Eigen::MatrixXcd reduced_density_matrix(const MatrixProductState& psi, int window_start,
                                        int window_len);

/// MPO for IsingChainSpec in the standard nearest-neighbor 3x3 transfer
/// form (internal bond extent 3).
MatrixProductOperator ising_mpo(const IsingChainSpec& spec);

/// Dense amplitude vector (2^N entries, site 1 = most significant bit).
/// Intended for N small enough that 2^N fits comfortably in memory.
Eigen::VectorXcd mps_amplitudes(const MatrixProductState& psi);

/// Dense matrix of an MPO (2^N x 2^N), for small N.
Eigen::MatrixXcd mpo_matrix(const MatrixProductOperator& op);

}  // namespace entprobe
