#pragma once

#include <Eigen/Dense>

#include "grid.hpp"

namespace qfc {

// Gaussian belief: means and (co)variances of position and momentum.
struct Belief {
  double x = 0.0;
  double p = 0.0;
  double vx = 0.5;
  double vp = 0.5;
  double c = 0.0;
};

struct FilterParams {
  double A = 2.0;
  double B = 2.0 / 18.0;
  double k = 0.3;
  double beta = 0.1;
  double hbar = 1.0;
};

// One Euler step of the five-moment Gaussian estimator driven by the record
// increment dQ = <x> dt + dW; the innovation is dV = dQ - x_est dt.
Belief filter_step(const Belief& b, const FilterParams& f, double u, double dQ,
                   double dt);

// Matched classical filter. gain_scale multiplies P H^T / R in the mean
// update and enters squared in the Riccati damping; the quantum filter needs
// gain_scale = 2 sqrt(2k), which no plain (H, R) choice reproduces.
struct LinearSystemSpec {
  Eigen::Matrix2d F;
  Eigen::Vector2d G;
  Eigen::RowVector2d H;
  double R = 1.0;
  Eigen::Matrix2d Q;
  double gain_scale = 1.0;
};

struct KbState {
  Eigen::Vector2d m;
  Eigen::Matrix2d P;
};

KbState kalman_bucy_step(const KbState& s, const LinearSystemSpec& spec,
                         double u, double dy, double dt);

// Linear problem equivalent to the B = 0 Gaussian estimator.
LinearSystemSpec matched_linear_spec(const FilterParams& f);

// Guard against a collapsed or non-finite belief covariance.
bool belief_needs_reset(const Belief& b);
// Keep the means, restore second moments from the fresh belief.
Belief belief_reset(const Belief& b, const Belief& fresh);

}  // namespace qfc
