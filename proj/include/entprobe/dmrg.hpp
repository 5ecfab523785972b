#pragma once

#include <cstdint>
#include <vector>

#include "entprobe/mps.hpp"

namespace entprobe {

struct DmrgConfig {
  std::size_t max_bond = 64;
  double cutoff = 1e-10;
  int max_sweeps = 20;
  double energy_tol = 1e-10;
  std::uint64_t seed = 7;

  void validate() const;
};

struct GroundStateResult {
  MatrixProductState state;
  double energy = 0.0;
  int sweeps_used = 0;
  bool converged = false;
  /// One entry per sweep, recorded at the right edge of the chain.
  std::vector<double> energy_history;
};

/// Two-site DMRG ground-state search. The state is seeded from a random
/// product-plus-noise guess derived from cfg.seed, so repeated runs with
/// the same config are bitwise deterministic. Local problems are solved
/// densely up to dimension 512 and with warm-started Lanczos above that.
GroundStateResult ground_state(const MatrixProductOperator& h, const DmrgConfig& cfg);

}  // namespace entprobe
