#include "control.hpp"

#include <cmath>

namespace qfc {

ControlLaw lqg_feedback(double x_est, double p_est, double x_tgt, double p_tgt,
                        double A, double B, double Gamma) {
  ControlLaw law;
  law.u0 = 2.0 * A * x_est - 4.0 * B * x_est * x_est * x_est;
  const double slope = 2.0 * A - 12.0 * B * x_est * x_est;
  law.u_tilde = slope + std::sqrt(slope * slope + Gamma);
  law.u1 = -law.u_tilde * (x_est - x_tgt);
  law.u2 = -std::sqrt(2.0 * law.u_tilde + Gamma) * (p_est - p_tgt);
  law.u = law.u0 + law.u1 + law.u2;
  return law;
}

double clamp_control(double u, double u_max) {
  if (u_max <= 0.0) return u;
  if (u > u_max) return u_max;
  if (u < -u_max) return -u_max;
  return u;
}

void TargetSchedule::validate() const {
  if (times.empty() || times.size() != targets.size())
    throw ConfigError("schedule needs equal nonempty times and targets");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ConfigError("schedule times must be strictly increasing");
}

double TargetSchedule::at(double t) const {
  if (times.empty() || t < times.front())
    throw std::invalid_argument("schedule queried before first segment");
  std::size_t i = times.size() - 1;
  while (t < times[i]) --i;
  return targets[i];
}

}  // namespace qfc
