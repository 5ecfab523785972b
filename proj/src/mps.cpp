#include "entprobe/mps.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace entprobe {

namespace {

constexpr double kSqrtHalf = 0.7071067811865475244;

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

void check_site_range(const MatrixProductState& psi, int site, const char* who) {
  if (site < 0 || site >= psi.length()) {
    std::ostringstream msg;
    msg << who << ": site " << site << " out of range for N=" << psi.length();
    throw std::invalid_argument(msg.str());
  }
}

/// Left-orthogonalize sites[i] via thin QR, absorbing the R factor into
/// sites[i+1].
void push_right(std::vector<DenseTensor>& sites, int i) {
  const DenseTensor& t = sites[i];
  const std::size_t l = t.extent(0), d = t.extent(1), r = t.extent(2);
  Eigen::MatrixXcd m = tensor_as_matrix(t, 2);  // (l*d) x r
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  const std::size_t k = std::min(l * d, r);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(l * d, k);
  Eigen::MatrixXcd rest =
      qr.matrixQR().topRows(k).triangularView<Eigen::Upper>() * Eigen::MatrixXcd::Identity(r, r);
  sites[i] = matrix_as_tensor(q, {l, d, k});
  Eigen::MatrixXcd next = tensor_as_matrix(sites[i + 1], 1);  // r x (d*r2)
  const std::size_t d2 = sites[i + 1].extent(1), r2 = sites[i + 1].extent(2);
  sites[i + 1] = matrix_as_tensor(rest * next, {k, d2, r2});
}

/// Right-orthogonalize sites[i], absorbing the remainder into sites[i-1].
void push_left(std::vector<DenseTensor>& sites, int i) {
  const DenseTensor& t = sites[i];
  const std::size_t l = t.extent(0), d = t.extent(1), r = t.extent(2);
  Eigen::MatrixXcd m = tensor_as_matrix(t, 1);  // l x (d*r)
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m.adjoint());
  const std::size_t k = std::min(l, d * r);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(d * r, k);
  Eigen::MatrixXcd rest =
      qr.matrixQR().topRows(k).triangularView<Eigen::Upper>() * Eigen::MatrixXcd::Identity(l, l);
  sites[i] = matrix_as_tensor(q.adjoint(), {k, d, r});
  Eigen::MatrixXcd prev = tensor_as_matrix(sites[i - 1], 2);  // (l0*d0) x l
  const std::size_t l0 = sites[i - 1].extent(0), d0 = sites[i - 1].extent(1);
  sites[i - 1] = matrix_as_tensor(prev * rest.adjoint(), {l0, d0, k});
}

}  // namespace

std::size_t MatrixProductState::bond_dim(int bond) const {
  if (bond <= 0 || bond >= length()) return 1;
  return sites[bond].extent(0);
}

std::size_t MatrixProductState::max_bond_dim() const {
  std::size_t chi = 1;
  for (const DenseTensor& t : sites) chi = std::max(chi, t.extent(2));
  return chi;
}

void MatrixProductState::validate() const {
  if (sites.empty()) throw std::invalid_argument("MatrixProductState: empty chain");
  for (int i = 0; i < length(); ++i) {
    const DenseTensor& t = sites[i];
    if (t.rank() != 3 || t.extent(1) != 2) {
      throw dimension_error("MatrixProductState: site tensors must be (left, 2, right)");
    }
    if (i > 0 && sites[i - 1].extent(2) != t.extent(0)) {
      throw dimension_error("MatrixProductState: adjacent bond extents mismatch");
    }
  }
  if (sites.front().extent(0) != 1 || sites.back().extent(2) != 1) {
    throw dimension_error("MatrixProductState: boundary bonds must have extent 1");
  }
}

void MatrixProductOperator::validate() const {
  if (sites.empty()) throw std::invalid_argument("MatrixProductOperator: empty chain");
  for (int i = 0; i < length(); ++i) {
    const DenseTensor& t = sites[i];
    if (t.rank() != 4 || t.extent(1) != 2 || t.extent(2) != 2) {
      throw dimension_error("MatrixProductOperator: site tensors must be (left, 2, 2, right)");
    }
    if (i > 0 && sites[i - 1].extent(3) != t.extent(0)) {
      throw dimension_error("MatrixProductOperator: adjacent bond extents mismatch");
    }
  }
  if (sites.front().extent(0) != 1 || sites.back().extent(3) != 1) {
    throw dimension_error("MatrixProductOperator: boundary bonds must have extent 1");
  }
}

double IsingChainSpec::coupling_at(int bond) const {
  if (bond < 1 || bond >= n_sites) {
    throw std::invalid_argument("IsingChainSpec: bond index out of range");
  }
  if (const auto* u = std::get_if<Uniform>(&coupling)) {
    return u->j;
  }
  const auto& dg = std::get<DoubleGaussian>(coupling);
  const double da = (bond - dg.xa) / dg.a;
  const double db = (bond - dg.xb) / dg.b;
  return std::exp(-0.5 * da * da) + 0.5 * std::exp(-0.5 * db * db);
}

void IsingChainSpec::validate() const {
  if (n_sites < 2) throw std::invalid_argument("IsingChainSpec: need at least 2 sites");
  if (const auto* dg = std::get_if<DoubleGaussian>(&coupling)) {
    if (dg->a <= 0.0 || dg->b <= 0.0) {
      throw std::invalid_argument("IsingChainSpec: Gaussian widths must be positive");
    }
  }
}

MatrixProductState make_ghz(int n) {
  if (n < 1) throw std::invalid_argument("make_ghz: need at least 1 site");
  MatrixProductState psi;
  if (n == 1) {
    DenseTensor t({1, 2, 1});
    t[0] = t[1] = kSqrtHalf;
    psi.sites.push_back(std::move(t));
    return psi;
  }
  DenseTensor first({1, 2, 2});
  first.set({0, 0, 0}, kSqrtHalf);
  first.set({0, 1, 1}, kSqrtHalf);
  DenseTensor mid({2, 2, 2});
  mid.set({0, 0, 0}, 1.0);
  mid.set({1, 1, 1}, 1.0);
  DenseTensor last({2, 2, 1});
  last.set({0, 0, 0}, 1.0);
  last.set({1, 1, 0}, 1.0);

  psi.sites.push_back(first);
  for (int i = 1; i < n - 1; ++i) psi.sites.push_back(mid);
  psi.sites.push_back(last);
  return psi;
}

MatrixProductState make_product(const std::vector<Eigen::Vector2cd>& locals) {
  if (locals.empty()) throw std::invalid_argument("make_product: empty chain");
  MatrixProductState psi;
  for (const auto& v : locals) {
    if (std::abs(v.norm() - 1.0) > 1e-10) {
      throw std::invalid_argument("make_product: local vectors must have unit norm");
    }
    DenseTensor t({1, 2, 1});
    t[0] = v(0);
    t[1] = v(1);
    psi.sites.push_back(std::move(t));
  }
  return psi;
}

MatrixProductState random_mps(int n, std::uint64_t seed, double noise) {
  if (n < 1) throw std::invalid_argument("random_mps: need at least 1 site");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&] { return cd(gauss(rng), gauss(rng)); };

  MatrixProductState psi;
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2cd v(draw(), draw());
    v /= v.norm();
    const std::size_t l = (i == 0) ? 1 : 2;
    const std::size_t r = (i == n - 1) ? 1 : 2;
    DenseTensor t({l, 2, r});
    for (std::size_t a = 0; a < l; ++a) {
      for (std::size_t s = 0; s < 2; ++s) {
        for (std::size_t b = 0; b < r; ++b) {
          cd value = noise * draw();
          if (a == 0 && b == 0) value += v(s);
          t.set({a, s, b}, value);
        }
      }
    }
    psi.sites.push_back(std::move(t));
  }
  return canonicalize(psi, 0);
}

MatrixProductState canonicalize(const MatrixProductState& psi, int center) {
  psi.validate();
  check_site_range(psi, center, "canonicalize");
  MatrixProductState out = psi;
  out.center.reset();
  for (int i = 0; i < center; ++i) push_right(out.sites, i);
  for (int i = out.length() - 1; i > center; --i) push_left(out.sites, i);
  const double nrm = out.sites[center].norm();
  if (nrm < 1e-300) throw numeric_error("canonicalize: state has zero norm");
  out.sites[center].scale(1.0 / nrm);
  out.center = center;
  return out;
}

cd overlap(const MatrixProductState& psi, const MatrixProductState& phi) {
  if (psi.length() != phi.length()) {
    throw std::invalid_argument("overlap: length mismatch");
  }
  DenseTensor env({1, 1});
  env[0] = 1.0;
  for (int i = 0; i < psi.length(); ++i) {
    // env axes: (bra bond of psi, ket bond of phi)
    DenseTensor t = contract(env, psi.sites[i].conjugated(), {{0, 0}});  // (ket, s, bra')
    env = contract(t, phi.sites[i], {{0, 0}, {1, 1}});                   // (bra', ket')
  }
  return env[0];
}

double expectation_mpo(const MatrixProductState& psi, const MatrixProductOperator& op) {
  if (psi.length() != op.length()) {
    throw std::invalid_argument("expectation_mpo: length mismatch");
  }
  DenseTensor env({1, 1, 1});  // (ket, mpo, bra)
  env[0] = 1.0;
  for (int i = 0; i < psi.length(); ++i) {
    DenseTensor t1 = contract(env, psi.sites[i], {{0, 0}});          // (w, bra, s, ket')
    DenseTensor t2 = contract(t1, op.sites[i], {{0, 0}, {2, 2}});    // (bra, ket', s_out, w')
    env = contract(t2, psi.sites[i].conjugated(), {{0, 0}, {2, 1}});  // (ket', w', bra')
  }
  const cd value = env[0];
  if (std::abs(value.imag()) > 1e-10 * std::max(1.0, std::abs(value.real()))) {
    throw numeric_error("expectation_mpo: expectation has a non-negligible imaginary part");
  }
  return value.real();
}

Eigen::MatrixXcd reduced_density_matrix(const MatrixProductState& psi, int window_start,
                                        int window_len) {
  if (window_len < 1) throw std::invalid_argument("reduced_density_matrix: empty window");
  if (window_len > 6) {
    throw capability_error("reduced_density_matrix: windows above 6 sites are not supported");
  }
  check_site_range(psi, window_start, "reduced_density_matrix");
  if (window_start + window_len > psi.length()) {
    throw std::invalid_argument("reduced_density_matrix: window exceeds chain");
  }

  const MatrixProductState canon = canonicalize(psi, window_start);
  DenseTensor block = canon.sites[window_start];
  for (int k = 1; k < window_len; ++k) {
    block = contract(block, canon.sites[window_start + k], {{block.rank() - 1, 0}});
  }
  const std::size_t dim = std::size_t{1} << window_len;
  block = block.reshaped({block.extent(0), dim, block.shape().back()});

  // rho[s, s'] = sum_{a,b} block[a, s, b] conj(block[a, s', b])
  const DenseTensor m = block.permuted({1, 0, 2});
  const Eigen::MatrixXcd flat = tensor_as_matrix(m, 1);
  return flat * flat.adjoint();
}

MatrixProductOperator ising_mpo(const IsingChainSpec& spec) {
  spec.validate();
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd sz = pauli_z();
  const Eigen::Matrix2cd sx = pauli_x();

  auto put_block = [](DenseTensor& w, std::size_t row, std::size_t col,
                      const Eigen::Matrix2cd& block) {
    for (std::size_t so = 0; so < 2; ++so) {
      for (std::size_t si = 0; si < 2; ++si) {
        w.set({row, so, si, col}, block(so, si));
      }
    }
  };

  MatrixProductOperator op;
  for (int i = 1; i <= spec.n_sites; ++i) {
    const bool first = (i == 1);
    const bool last = (i == spec.n_sites);
    const std::size_t l = first ? 1 : 3;
    const std::size_t r = last ? 1 : 3;
    DenseTensor w({l, 2, 2, r});

    // Full 3x3 block pattern:
    //   [ I   -J_i sz   -g sx ]
    //   [ 0      0        sz  ]
    //   [ 0      0        I   ]
    // with the first site keeping only the top row and the last site only
    // the rightmost column.
    const double j = last ? 0.0 : spec.coupling_at(i);
    if (first && last) {
      throw std::invalid_argument("ising_mpo: need at least 2 sites");
    }
    if (first) {
      put_block(w, 0, 0, id);
      put_block(w, 0, 1, -j * sz);
      put_block(w, 0, 2, -spec.g * sx);
    } else if (last) {
      put_block(w, 0, 0, -spec.g * sx);
      put_block(w, 1, 0, sz);
      put_block(w, 2, 0, id);
    } else {
      put_block(w, 0, 0, id);
      put_block(w, 0, 1, -j * sz);
      put_block(w, 0, 2, -spec.g * sx);
      put_block(w, 1, 2, sz);
      put_block(w, 2, 2, id);
    }
    op.sites.push_back(std::move(w));
  }
  return op;
}

Eigen::VectorXcd mps_amplitudes(const MatrixProductState& psi) {
  DenseTensor t = psi.sites[0];
  for (int i = 1; i < psi.length(); ++i) {
    t = contract(t, psi.sites[i], {{t.rank() - 1, 0}});
  }
  const std::size_t dim = std::size_t{1} << psi.length();
  return tensor_as_vector(t.reshaped({dim}));
}

Eigen::MatrixXcd mpo_matrix(const MatrixProductOperator& op) {
  DenseTensor t = op.sites[0];
  for (int i = 1; i < op.length(); ++i) {
    t = contract(t, op.sites[i], {{t.rank() - 1, 0}});
  }
  const int n = op.length();
  // Axes are (1, o1, i1, o2, i2, ..., oN, iN, 1); gather outs then ins.
  shape_t squeezed;
  for (int k = 0; k < 2 * n; ++k) squeezed.push_back(2);
  t = t.reshaped(squeezed);
  std::vector<std::size_t> order;
  for (int k = 0; k < n; ++k) order.push_back(2 * k);
  for (int k = 0; k < n; ++k) order.push_back(2 * k + 1);
  t = t.permuted(order);
  return tensor_as_matrix(t, static_cast<std::size_t>(n));
}

}  // namespace entprobe
