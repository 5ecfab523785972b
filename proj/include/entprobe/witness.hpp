#pragma once

#include <random>

#include <Eigen/Dense>

#include "entprobe/tensor.hpp"

namespace entprobe {

/// Genuine multipartite entanglement witness acting on an M-site window,
/// realized as q = c*I - |target><target| with c the maximal squared
/// Schmidt coefficient of the target over all window bipartitions. By
/// construction Tr(q sigma) >= 0 for every biseparable sigma, while
/// Tr(q |target><target|) = c - 1 < 0 whenever the target is entangled
/// across every bipartition.
struct WindowWitness {
  int window_sites = 0;
  Eigen::MatrixXcd q;
  double offset = 0.0;         // the biseparable bound c
  Eigen::VectorXcd target;     // the pure state the projector was built from

  void validate() const;
};

/// |GHZ_M> as a dense vector (site 1 = most significant bit).
Eigen::VectorXcd ghz_vector(int m);

/// Maximal squared Schmidt coefficient of `target` over all 2^(M-1)-1
/// bipartitions of the window. Equals 1 for product states, 1/2 for GHZ.
double biseparable_bound(const Eigen::VectorXcd& target);

/// Witness c*I - |target><target| for a unit-norm target on 2..6 qubits.
WindowWitness projector_witness(const Eigen::VectorXcd& target);

/// Local-unitary refinement: finds U_1 x ... x U_M maximizing
/// |<window_state| U_1 x ... x U_M |GHZ_M>| by alternating polar updates,
/// then builds the projector witness for the rotated GHZ target. Starting
/// from identity unitaries guarantees the refined witness value on
/// `window_state` never exceeds the plain GHZ witness value.
WindowWitness refine_target(const Eigen::VectorXcd& window_state, int iterations);

/// max(0, -value).
double witnessed_entanglement(double value);

/// Haar-random pure state that is a product across the bipartition encoded
/// by `partition_mask` (bit k set = window site k+1, counted from the most
/// significant bit, belongs to the first factor). Used by the witness
/// certification tests.
Eigen::VectorXcd random_biseparable_state(int m, unsigned partition_mask, std::mt19937_64& rng);

}  // namespace entprobe
