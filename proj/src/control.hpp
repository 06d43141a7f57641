#pragma once

#include <stdexcept>
#include <vector>

#include "grid.hpp"

namespace qfc {

struct ControlParams {
  double Gamma = 100.0;
  double u_max = 0.0;  // 0 disables clamping
};

// Feedback force decomposition: u0 tracks the conservative force at the
// estimate, u1/u2 are the linearized optimal position/momentum gains.
struct ControlLaw {
  double u0 = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double u_tilde = 0.0;
  double u = 0.0;
};

ControlLaw lqg_feedback(double x_est, double p_est, double x_tgt, double p_tgt,
                        double A, double B, double Gamma);

double clamp_control(double u, double u_max);

// Piecewise-constant target, left-closed segments: value i applies on
// [times[i], times[i+1]). Query before the first segment is a usage error.
struct TargetSchedule {
  std::vector<double> times;
  std::vector<double> targets;
  double at(double t) const;
  void validate() const;
};

}  // namespace qfc
