#include "entprobe/dmrg.hpp"

#include <cmath>

namespace entprobe {

namespace {

/// Environments carry axes (ket bond, mpo bond, bra bond).
DenseTensor boundary_env() {
  DenseTensor e({1, 1, 1});
  e[0] = 1.0;
  return e;
}

DenseTensor transfer_left(const DenseTensor& env, const DenseTensor& site,
                          const DenseTensor& w) {
  DenseTensor t1 = contract(env, site, {{0, 0}});             // (w, bra, s, ket')
  DenseTensor t2 = contract(t1, w, {{0, 0}, {2, 2}});         // (bra, ket', so, w')
  return contract(t2, site.conjugated(), {{0, 0}, {2, 1}});   // (ket', w', bra')
}

DenseTensor transfer_right(const DenseTensor& env, const DenseTensor& site,
                           const DenseTensor& w) {
  DenseTensor t1 = contract(site, env, {{2, 0}});              // (ket, s, w, bra)
  DenseTensor t2 = contract(t1, w, {{1, 2}, {2, 3}});          // (ket, bra, w_l, so)
  return contract(t2, site.conjugated(), {{1, 2}, {3, 1}});    // (ket, w_l, bra')
}

/// H_eff |v> for the two-site problem, v laid out as (a, s1, s2, b).
DenseTensor apply_two_site(const DenseTensor& left, const DenseTensor& w1,
                           const DenseTensor& w2, const DenseTensor& right,
                           const DenseTensor& v) {
  DenseTensor x1 = contract(left, v, {{0, 0}});           // (w, bra, s1, s2, b)
  DenseTensor x2 = contract(x1, w1, {{0, 0}, {2, 2}});    // (bra, s2, b, s1o, wm)
  DenseTensor x3 = contract(x2, w2, {{4, 0}, {1, 2}});    // (bra, b, s1o, s2o, wr)
  return contract(x3, right, {{1, 0}, {4, 1}});           // (bra, s1o, s2o, b_bra)
}

Eigen::MatrixXcd dense_two_site(const DenseTensor& left, const DenseTensor& w1,
                                const DenseTensor& w2, const DenseTensor& right) {
  DenseTensor d1 = contract(left, w1, {{1, 0}});   // (ak, ab, s1o, s1i, wm)
  DenseTensor d2 = contract(d1, w2, {{4, 0}});     // (ak, ab, s1o, s1i, s2o, s2i, wr)
  DenseTensor d3 = contract(d2, right, {{6, 1}});  // (ak, ab, s1o, s1i, s2o, s2i, bk, bb)
  DenseTensor rows_then_cols = d3.permuted({1, 2, 4, 7, 0, 3, 5, 6});
  return tensor_as_matrix(rows_then_cols, 4);
}

}  // namespace

void DmrgConfig::validate() const {
  if (max_bond < 2) throw std::invalid_argument("DmrgConfig: max_bond must be >= 2");
  if (cutoff < 0.0) throw std::invalid_argument("DmrgConfig: cutoff must be >= 0");
  if (max_sweeps < 1) throw std::invalid_argument("DmrgConfig: max_sweeps must be >= 1");
  if (energy_tol <= 0.0) throw std::invalid_argument("DmrgConfig: energy_tol must be > 0");
}

GroundStateResult ground_state(const MatrixProductOperator& h, const DmrgConfig& cfg) {
  cfg.validate();
  h.validate();
  const int n = h.length();
  if (n < 2) throw std::invalid_argument("ground_state: need at least 2 sites");

  MatrixProductState psi = random_mps(n, cfg.seed);

  std::vector<DenseTensor> left(n + 1), right(n + 1);
  left[0] = boundary_env();
  right[n] = boundary_env();
  for (int i = n - 1; i >= 2; --i) {
    right[i] = transfer_right(right[i + 1], psi.sites[i], h.sites[i]);
  }

  GroundStateResult result;
  double last_ritz = 0.0;

  auto solve_bond = [&](int i) -> DenseTensor {
    DenseTensor theta = contract(psi.sites[i], psi.sites[i + 1], {{2, 0}});
    const Eigen::Index dim = static_cast<Eigen::Index>(theta.size());
    EigPair pair;
    if (dim <= 512) {
      pair = eigh_smallest(dense_two_site(left[i], h.sites[i], h.sites[i + 1], right[i + 2]));
    } else {
      const Eigen::VectorXcd guess = tensor_as_vector(theta);
      auto apply = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
        DenseTensor vin = vector_as_tensor(in, theta.shape());
        out = tensor_as_vector(
            apply_two_site(left[i], h.sites[i], h.sites[i + 1], right[i + 2], vin));
      };
      try {
        pair = lanczos_smallest(apply, dim, 1e-11, 600, &guess);
      } catch (const convergence_error& err) {
        // Warm-started Lanczos keeps the Ritz value variational, so a
        // mildly unconverged iterate is still usable; reject only if the
        // residual is grossly off.
        Eigen::VectorXcd best =
            Eigen::Map<const Eigen::VectorXcd>(err.best_vector().data(), dim);
        Eigen::VectorXcd check(dim);
        apply(best, check);
        const double residual = (check - err.best_value() * best).norm();
        if (residual > 1e-6 * std::max(1.0, std::abs(err.best_value()))) {
          throw;
        }
        pair = EigPair{err.best_value(), std::move(best)};
      }
    }
    if (!pair.vector.allFinite() || !std::isfinite(pair.value)) {
      throw numeric_error("ground_state: local solve produced non-finite data");
    }
    last_ritz = pair.value;
    return vector_as_tensor(pair.vector, theta.shape());
  };

  auto split_bond = [&](const DenseTensor& theta, int i, bool moving_right) {
    SvdSplit split = svd_split(theta, 2, cfg.max_bond, cfg.cutoff);
    Eigen::VectorXd s = split.singular_values;
    s /= s.norm();  // keep the state normalized after truncation
    const std::size_t r = static_cast<std::size_t>(s.size());
    if (moving_right) {
      psi.sites[i] = split.u;
      Eigen::MatrixXcd sv = s.cast<cd>().asDiagonal() * tensor_as_matrix(split.v, 1);
      psi.sites[i + 1] = matrix_as_tensor(sv, {r, 2, theta.extent(3)});
    } else {
      psi.sites[i + 1] = split.v;
      Eigen::MatrixXcd us = tensor_as_matrix(split.u, 2) * s.cast<cd>().asDiagonal();
      psi.sites[i] = matrix_as_tensor(us, {theta.extent(0), 2, r});
    }
  };

  bool converged = false;
  int sweep = 0;
  for (; sweep < cfg.max_sweeps && !converged; ++sweep) {
    for (int i = 0; i <= n - 2; ++i) {
      DenseTensor theta = solve_bond(i);
      split_bond(theta, i, true);
      if (i < n - 2) {
        left[i + 1] = transfer_left(left[i], psi.sites[i], h.sites[i]);
      }
    }
    result.energy_history.push_back(last_ritz);

    for (int i = n - 2; i >= 0; --i) {
      DenseTensor theta = solve_bond(i);
      split_bond(theta, i, false);
      if (i > 0) {
        right[i + 1] = transfer_right(right[i + 2], psi.sites[i + 1], h.sites[i + 1]);
      }
    }

    const std::size_t k = result.energy_history.size();
    if (k >= 2 && std::abs(result.energy_history[k - 1] - result.energy_history[k - 2]) <
                      cfg.energy_tol) {
      converged = true;
    }
  }

  psi.center = 0;
  result.state = std::move(psi);
  result.converged = converged;
  result.sweeps_used = sweep;
  result.energy = expectation_mpo(result.state, h);
  return result;
}

}  // namespace entprobe
