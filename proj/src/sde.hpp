#pragma once

#include <Eigen/Dense>

#include "rng.hpp"

namespace qfc {

// One Euler-Maruyama step with diagonal noise:
// x + a(t, x) dt + b(t, x) .* dW.
template <class Drift, class Diff>
Eigen::VectorXd em_step(const Eigen::VectorXd& x, double t, double dt,
                        const Eigen::VectorXd& dW, Drift&& a, Diff&& b) {
  return x + a(t, x) * dt + b(t, x).cwiseProduct(dW);
}

// m consecutive Wiener increments starting at noise index first_index.
inline Eigen::VectorXd wiener_increments(const GaussianStream& gs,
                                         std::uint64_t first_index, int m,
                                         double dt) {
  Eigen::VectorXd dW(m);
  const double sq = std::sqrt(dt);
  for (int i = 0; i < m; ++i) dW[i] = gs.wiener(first_index + i, sq);
  return dW;
}

}  // namespace qfc
