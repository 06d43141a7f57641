#pragma once

#include <Eigen/Dense>

#include "grid.hpp"

// fftw3.h is kept out of this header; plans live behind the Fft pimpl.

namespace qfc {

struct ModelParams {
  double A = 2.0;
  double B = 2.0 / 18.0;
  double k = 0.3;     // measurement strength
  double beta = 0.1;  // thermal coupling
};

// FFTW plan bundle for one grid size; one instance per engine, never shared
// across threads (plan creation is serialized internally).
class Fft {
 public:
  explicit Fft(int n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void vec_forward(VectorXcd& v);
  void vec_backward(VectorXcd& v);  // includes the 1/n scale
  // Position <-> momentum representation of a density matrix,
  // rho_p = F rho F^dag / n.
  void to_momentum(MatrixXcd& rho);
  void to_position(MatrixXcd& rho);

 private:
  struct Plans;
  int n_;
  Plans* p_;
};

// Position-measured pure-state propagator (split-operator unitary, exact
// exponential dephasing-free diffusion factor). Two noises per step: dW0
// drives the measurement (read out), dW1 the thermal coupling (unread).
class SseEngine {
 public:
  SseEngine(const Grid& g, const ModelParams& m, double dt);
  struct StepResult {
    double x_mean_pre;  // <x> before the step; the record reads dQ = <x> dt + dW0
    double norm_pre;    // norm before renormalization (drift diagnostic)
  };
  StepResult step(VectorXcd& psi, double u, double dW0, double dW1);
  double mean_x(const VectorXcd& psi) const;
  double var_x(const VectorXcd& psi) const;
  double mean_p(const VectorXcd& psi);
  double energy(const VectorXcd& psi);  // bare-potential energy, no control term
  const Grid& grid() const { return g_; }
  double dt() const { return dt_; }

 private:
  Grid g_;
  ModelParams m_;
  double dt_, s2k_, s2b_;
  VectorXd v_;
  VectorXcd kin_half_, pot_base_;
  Fft fft_;
};

// Position-measured density-matrix propagator; dW = 0 gives the
// unconditioned master equation exactly (the stochastic factor collapses
// to the identity).
class SmeEngine {
 public:
  SmeEngine(const Grid& g, const ModelParams& m, double dt);
  void step(MatrixXcd& rho, double u, double dW);
  void step_unconditioned(MatrixXcd& rho, double u) { step(rho, u, 0.0); }
  struct Moments {
    double x, p, vx, vp, c, energy, purity;
  };
  Moments moments(const MatrixXcd& rho);
  MatrixXcd momentum_rep(const MatrixXcd& rho);
  const Grid& grid() const { return g_; }

 private:
  Grid g_;
  ModelParams m_;
  double dt_, s2k_;
  VectorXd v_;
  VectorXcd kin_half_, pot_base_;
  Eigen::MatrixXd deph_;
  Fft fft_;
};

// Free particle with the momentum observable measured; the state is held in
// the momentum representation where every update is elementwise.
class MomentumSmeEngine {
 public:
  MomentumSmeEngine(const Grid& g, double k_meas, double beta, double dt);
  void step(MatrixXcd& rho_p, double dW);
  struct Moments {
    double x, p, vx, vp;
  };
  Moments moments(const MatrixXcd& rho_p);
  MatrixXcd initial_density(const VectorXcd& psi_position);
  const Grid& grid() const { return g_; }

 private:
  Grid g_;
  double km_, beta_, dt_, s2k_;
  MatrixXcd hphase_;
  Eigen::MatrixXd deph_;
  Fft fft_;
};

// Measurement record increment for a step that started at <x> = x_mean_pre.
inline double record_increment(double x_mean_pre, double dt, double dW0) {
  return x_mean_pre * dt + dW0;
}

}  // namespace qfc
