#include "estimator.hpp"

#include <cmath>

namespace qfc {

Belief filter_step(const Belief& b, const FilterParams& f, double u, double dQ,
                   double dt) {
  const double g = 2.0 * std::sqrt(2.0 * f.k);
  const double dV = dQ - b.x * dt;
  Belief n;
  n.x = b.x + b.p * dt + g * b.vx * dV;
  n.p = b.p +
        (-4.0 * f.B * b.x * b.x * b.x + 2.0 * f.A * b.x -
         12.0 * f.B * b.x * b.vx + u) *
            dt +
        g * b.c * dV;
  n.vx = b.vx + (2.0 * b.c - 8.0 * f.k * b.vx * b.vx) * dt;
  n.vp = b.vp + (-24.0 * f.B * b.x * b.x * b.c + 4.0 * f.A * b.c -
                 24.0 * f.B * b.c * b.vx +
                 2.0 * (f.k + f.beta) * f.hbar * f.hbar -
                 8.0 * f.k * b.c * b.c) *
                    dt;
  n.c = b.c + (b.vp - 12.0 * f.B * b.x * b.x * b.vx + 2.0 * f.A * b.vx -
               12.0 * f.B * b.vx * b.vx - 8.0 * f.k * b.c * b.vx) *
                  dt;
  return n;
}

KbState kalman_bucy_step(const KbState& s, const LinearSystemSpec& spec,
                         double u, double dy, double dt) {
  const double innov = dy - (spec.H * s.m)(0) * dt;
  const Eigen::Vector2d gain = (spec.gain_scale / spec.R) * (s.P * spec.H.transpose());
  KbState n;
  n.m = s.m + (spec.F * s.m + spec.G * u) * dt + gain * innov;
  const Eigen::Matrix2d damp =
      (spec.gain_scale * spec.gain_scale / spec.R) *
      (s.P * spec.H.transpose()) * (spec.H * s.P);
  n.P = s.P + (spec.F * s.P + s.P * spec.F.transpose() + spec.Q - damp) * dt;
  n.P = 0.5 * (n.P + n.P.transpose()).eval();
  return n;
}

LinearSystemSpec matched_linear_spec(const FilterParams& f) {
  if (f.B != 0.0)
    throw ConfigError("matched linear spec requires B = 0");
  LinearSystemSpec s;
  s.F << 0.0, 1.0, 2.0 * f.A, 0.0;
  s.G << 0.0, 1.0;
  s.H << 1.0, 0.0;
  s.R = 1.0;
  s.Q << 0.0, 0.0, 0.0, 2.0 * (f.k + f.beta) * f.hbar * f.hbar;
  s.gain_scale = 2.0 * std::sqrt(2.0 * f.k);
  return s;
}

bool belief_needs_reset(const Belief& b) {
  if (!std::isfinite(b.x) || !std::isfinite(b.p) || !std::isfinite(b.vx) ||
      !std::isfinite(b.vp) || !std::isfinite(b.c))
    return true;
  return !(b.vx > 0.0) || !(b.vp > 0.0);
}

Belief belief_reset(const Belief& b, const Belief& fresh) {
  Belief n = b;
  if (!std::isfinite(n.x)) n.x = fresh.x;
  if (!std::isfinite(n.p)) n.p = fresh.p;
  n.vx = fresh.vx;
  n.vp = fresh.vp;
  n.c = fresh.c;
  return n;
}

}  // namespace qfc
