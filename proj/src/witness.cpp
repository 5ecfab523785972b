#include "entprobe/witness.hpp"

#include <bit>
#include <cmath>

namespace entprobe {

namespace {

int window_size_from_dim(Eigen::Index dim, const char* who) {
  int m = 0;
  while ((Eigen::Index{1} << m) < dim) ++m;
  if ((Eigen::Index{1} << m) != dim) {
    throw std::invalid_argument(std::string(who) + ": dimension is not a power of two");
  }
  return m;
}

void check_unit_norm(const Eigen::VectorXcd& v, const char* who) {
  if (std::abs(v.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument(std::string(who) + ": state must have unit norm");
  }
}

/// Gather the bits of x selected by mask, preserving bit order (highest
/// selected bit becomes the highest output bit).
unsigned compress_bits(unsigned x, unsigned mask, int m) {
  unsigned out = 0;
  for (int p = m - 1; p >= 0; --p) {
    if (mask & (1u << p)) {
      out = (out << 1) | ((x >> p) & 1u);
    }
  }
  return out;
}

/// Apply a single-qubit operator at bit position p of the index.
Eigen::VectorXcd apply_single(const Eigen::VectorXcd& v, const Eigen::Matrix2cd& u, int p) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  const unsigned mask = 1u << p;
  for (unsigned x = 0; x < static_cast<unsigned>(v.size()); ++x) {
    const unsigned bit = (x & mask) ? 1u : 0u;
    const unsigned base = x & ~mask;
    out(x) = u(bit, 0) * v(base) + u(bit, 1) * v(base | mask);
  }
  return out;
}

}  // namespace

void WindowWitness::validate() const {
  if (window_sites < 2) throw std::invalid_argument("WindowWitness: window must span >= 2 sites");
  const Eigen::Index dim = Eigen::Index{1} << window_sites;
  if (q.rows() != dim || q.cols() != dim) {
    throw dimension_error("WindowWitness: matrix size does not match window");
  }
  if ((q - q.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("WindowWitness: matrix not Hermitian");
  }
}

Eigen::VectorXcd ghz_vector(int m) {
  if (m < 1) throw std::invalid_argument("ghz_vector: need at least 1 site");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << m);
  v(0) = v(v.size() - 1) = cd(std::sqrt(0.5), 0.0);
  return v;
}

double biseparable_bound(const Eigen::VectorXcd& target) {
  const int m = window_size_from_dim(target.size(), "biseparable_bound");
  if (m < 2 || m > 6) {
    throw std::invalid_argument("biseparable_bound: window must span 2..6 sites");
  }
  check_unit_norm(target, "biseparable_bound");

  double bound = 0.0;
  const unsigned full = (1u << m) - 1u;
  const unsigned top_bit = 1u << (m - 1);
  // One mask per bipartition: fix the first site (highest bit) inside the
  // first factor to avoid double counting complements.
  for (unsigned mask = 1; mask < full; ++mask) {
    if (!(mask & top_bit)) continue;
    const int rows_bits = std::popcount(mask);
    Eigen::MatrixXcd reshaped(Eigen::Index{1} << rows_bits, Eigen::Index{1} << (m - rows_bits));
    for (unsigned x = 0; x <= full; ++x) {
      reshaped(compress_bits(x, mask, m), compress_bits(x, full & ~mask, m)) = target(x);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(reshaped);
    const double smax = svd.singularValues()(0);
    bound = std::max(bound, smax * smax);
  }
  return std::min(bound, 1.0);
}

WindowWitness projector_witness(const Eigen::VectorXcd& target) {
  const int m = window_size_from_dim(target.size(), "projector_witness");
  if (m < 2 || m > 6) {
    throw std::invalid_argument("projector_witness: window must span 2..6 sites");
  }
  check_unit_norm(target, "projector_witness");

  WindowWitness w;
  w.window_sites = m;
  w.offset = biseparable_bound(target);
  w.target = target;
  w.q = w.offset * Eigen::MatrixXcd::Identity(target.size(), target.size()) -
        target * target.adjoint();
  return w;
}

WindowWitness refine_target(const Eigen::VectorXcd& window_state, int iterations) {
  const int m = window_size_from_dim(window_state.size(), "refine_target");
  if (m < 2 || m > 4) {
    throw std::invalid_argument("refine_target: window must span 2..4 sites");
  }
  if (iterations < 0) throw std::invalid_argument("refine_target: iterations must be >= 0");
  check_unit_norm(window_state, "refine_target");

  const Eigen::VectorXcd ghz = ghz_vector(m);
  std::vector<Eigen::Matrix2cd> unitaries(m, Eigen::Matrix2cd::Identity());

  auto rotated = [&]() {
    Eigen::VectorXcd v = ghz;
    for (int site = 0; site < m; ++site) {
      v = apply_single(v, unitaries[site], m - 1 - site);
    }
    return v;
  };

  double best = std::abs(window_state.dot(rotated()));
  for (int pass = 0; pass < iterations; ++pass) {
    const double at_pass_start = best;
    for (int site = 0; site < m; ++site) {
      const int p = m - 1 - site;
      // Environment of U_site: overlap(U) = Tr(U * env).
      Eigen::VectorXcd partial = ghz;
      for (int other = 0; other < m; ++other) {
        if (other == site) continue;
        partial = apply_single(partial, unitaries[other], m - 1 - other);
      }
      Eigen::Matrix2cd env = Eigen::Matrix2cd::Zero();
      const unsigned mask = 1u << p;
      for (unsigned x = 0; x < static_cast<unsigned>(partial.size()); ++x) {
        const unsigned a = (x & mask) ? 1u : 0u;
        const unsigned base = x & ~mask;
        const cd wconj = std::conj(window_state(x));
        env(0, a) += partial(base) * wconj;
        env(1, a) += partial(base | mask) * wconj;
      }
      Eigen::JacobiSVD<Eigen::Matrix2cd> svd(env, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const double candidate = svd.singularValues().sum();
      if (candidate > best + 1e-15) {
        unitaries[site] = svd.matrixV() * svd.matrixU().adjoint();
        best = candidate;
      }
    }
    if (best - at_pass_start < 1e-14) break;
  }

  Eigen::VectorXcd target = rotated();
  target /= target.norm();
  return projector_witness(target);
}

double witnessed_entanglement(double value) { return std::max(0.0, -value); }

Eigen::VectorXcd random_biseparable_state(int m, unsigned partition_mask,
                                          std::mt19937_64& rng) {
  if (m < 2) throw std::invalid_argument("random_biseparable_state: need >= 2 sites");
  const unsigned full = (1u << m) - 1u;
  partition_mask &= full;
  const int first = std::popcount(partition_mask);
  if (first == 0 || first == m) {
    throw std::invalid_argument("random_biseparable_state: bipartition must be proper");
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  auto haar_vector = [&](Eigen::Index dim) {
    Eigen::VectorXcd v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) v(k) = cd(gauss(rng), gauss(rng));
    return Eigen::VectorXcd(v / v.norm());
  };

  const Eigen::VectorXcd a = haar_vector(Eigen::Index{1} << first);
  const Eigen::VectorXcd b = haar_vector(Eigen::Index{1} << (m - first));
  Eigen::VectorXcd out(Eigen::Index{1} << m);
  for (unsigned x = 0; x <= full; ++x) {
    out(x) = a(compress_bits(x, partition_mask, m)) *
             b(compress_bits(x, full & ~partition_mask, m));
  }
  return out;
}

}  // namespace entprobe
