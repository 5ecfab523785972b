#pragma once

#include <vector>

#include <Eigen/Dense>

#include "entprobe/mps.hpp"
#include "entprobe/witness.hpp"

namespace entprobe {

/// Single-site padding operator: either the identity or a scaled rank-1
/// projector scale * |direction><direction| (positive semidefinite by
/// construction: scale > 0, unit direction).
struct ContrastOperator {
  enum class Kind { identity, scaled_projector };

  Kind kind = Kind::identity;
  double scale = 1.0;
  Eigen::Vector2cd direction{1.0, 0.0};

  static ContrastOperator identity() { return {}; }
  static ContrastOperator projector(const Eigen::Vector2cd& direction, double scale = 1.0);
  static ContrastOperator plus(double scale = 1.0);

  Eigen::Matrix2cd matrix() const;
};

/// Contrast operators for every site outside the window, ordered left
/// block (chain order) then right block. `translational_symmetric` forces
/// the optimizer to keep all entries equal.
class ContrastFamily {
public:
  ContrastFamily() = default;
  explicit ContrastFamily(std::vector<ContrastOperator> entries,
                          bool translational_symmetric = false);

  static ContrastFamily uniform(int n_outside, const ContrastOperator& op,
                                bool translational_symmetric = false);
  static ContrastFamily identities(int n_outside);

  int size() const { return static_cast<int>(entries_.size()); }
  const ContrastOperator& entry(int k) const { return entries_.at(k); }
  ContrastOperator& entry(int k) { return entries_.at(k); }
  const std::vector<ContrastOperator>& entries() const { return entries_; }

  bool translational_symmetric() const { return translational_symmetric_; }
  bool all_projectors() const;

private:
  std::vector<ContrastOperator> entries_;
  bool translational_symmetric_ = false;
};

/// Witness placed at a 0-based window start together with the padding.
struct PlacedWitness {
  WindowWitness witness;
  int window_start = 0;
  ContrastFamily contrast;
};

/// One padded-witness evaluation. `normalized` is the witness expectation
/// on the projected window state; `raw = alpha * normalized` is the plain
/// chain expectation of the padded operator. `log_scale` is ln(alpha)
/// accumulated in log space, which stays finite on chains long enough for
/// alpha itself to underflow.
struct ProbeResult {
  int window_start = 0;
  double raw = 0.0;
  double alpha = 0.0;
  double normalized = 0.0;
  double log_scale = 0.0;
};

/// The window state obtained by projecting every outside site onto its
/// contrast direction. `state` has unit norm; alpha carries the squared
/// projection norm times the contrast scales.
struct ProjectedWindow {
  Eigen::VectorXcd state;
  double alpha = 0.0;
  double log_scale = 0.0;
};

/// Requires an all-projector contrast family.
ProjectedWindow projected_window_state(const MatrixProductState& psi,
                                       const PlacedWitness& placed);

ProbeResult probe(const MatrixProductState& psi, const PlacedWitness& placed);

/// Witness expectation on the reduced density matrix of the window
/// (equivalent to probe with an all-identity contrast).
double rdm_probe(const MatrixProductState& psi, const WindowWitness& witness, int window_start);

/// Padded witness whose contrast is the rank-1 projector onto a joint pure
/// state of ALL outside sites, supplied as an MPS over the left and right
/// blocks in chain order (its bond runs across the window). This covers
/// contrasts that do not factor into per-site operators, e.g. a GHZ
/// projector on the chain outside the window.
ProbeResult block_contrast_probe(const MatrixProductState& psi, const WindowWitness& witness,
                                 int window_start, const MatrixProductState& outside_state);

struct OptimizeResult {
  ContrastFamily contrast;
  ProbeResult result;
  std::vector<double> objective_history;  // normalized value after each update
  int sweeps_used = 0;
  bool converged = false;
};

/// Alternating single-site contrast optimization: each outside site's
/// direction is set to the minimal generalized eigenvector of the 2x2
/// pencil (A_j, B_j + 1e-12 I), where A_j carries the witness-inserted
/// environment and B_j the identity-inserted one. Scales are left
/// untouched (the normalized objective is scale-invariant). In
/// translational-symmetric mode all sites are updated simultaneously with
/// the averaged direction, accepted only if non-increasing.
OptimizeResult optimize_contrast(const MatrixProductState& psi, const WindowWitness& witness,
                                 int window_start, const ContrastFamily& init,
                                 int max_sweeps = 60, double tol = 1e-9);

enum class ContrastPolicy { fixed, optimize };

/// Probe every window start 0, stride, 2*stride, ..., <= N-M. Under the
/// optimize policy each position starts from the shared `base` family.
std::vector<ProbeResult> scan_positions(const MatrixProductState& psi,
                                        const WindowWitness& witness,
                                        const ContrastFamily& base, ContrastPolicy policy,
                                        int stride = 1);

}  // namespace entprobe
