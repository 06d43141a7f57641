#include "dynamics.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace qfc {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* fc(VectorXcd& v) { return reinterpret_cast<fftw_complex*>(v.data()); }
fftw_complex* fc(MatrixXcd& m) { return reinterpret_cast<fftw_complex*>(m.data()); }

}  // namespace

struct Fft::Plans {
  fftw_plan vf, vb;    // length-n vector
  fftw_plan a0f, a0b;  // matrix columns (contiguous)
  fftw_plan a1f, a1b;  // matrix rows (stride n)
  VectorXcd scratch_v;
  MatrixXcd scratch_m;
};

Fft::Fft(int n) : n_(n), p_(new Plans) {
  p_->scratch_v.setZero(n);
  p_->scratch_m.setZero(n, n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard<std::mutex> lock(planner_mutex());
  p_->vf = fftw_plan_dft_1d(n, fc(p_->scratch_v), fc(p_->scratch_v),
                            FFTW_FORWARD, flags);
  p_->vb = fftw_plan_dft_1d(n, fc(p_->scratch_v), fc(p_->scratch_v),
                            FFTW_BACKWARD, flags);
  auto* md = fc(p_->scratch_m);
  p_->a0f = fftw_plan_many_dft(1, &n, n, md, nullptr, 1, n, md, nullptr, 1, n,
                               FFTW_FORWARD, flags);
  p_->a0b = fftw_plan_many_dft(1, &n, n, md, nullptr, 1, n, md, nullptr, 1, n,
                               FFTW_BACKWARD, flags);
  p_->a1f = fftw_plan_many_dft(1, &n, n, md, nullptr, n, 1, md, nullptr, n, 1,
                               FFTW_FORWARD, flags);
  p_->a1b = fftw_plan_many_dft(1, &n, n, md, nullptr, n, 1, md, nullptr, n, 1,
                               FFTW_BACKWARD, flags);
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(p_->vf);
  fftw_destroy_plan(p_->vb);
  fftw_destroy_plan(p_->a0f);
  fftw_destroy_plan(p_->a0b);
  fftw_destroy_plan(p_->a1f);
  fftw_destroy_plan(p_->a1b);
  delete p_;
}

void Fft::vec_forward(VectorXcd& v) { fftw_execute_dft(p_->vf, fc(v), fc(v)); }

void Fft::vec_backward(VectorXcd& v) {
  fftw_execute_dft(p_->vb, fc(v), fc(v));
  v /= static_cast<double>(n_);
}

void Fft::to_momentum(MatrixXcd& rho) {
  fftw_execute_dft(p_->a0f, fc(rho), fc(rho));
  fftw_execute_dft(p_->a1b, fc(rho), fc(rho));
  rho /= static_cast<double>(n_);
}

void Fft::to_position(MatrixXcd& rho) {
  fftw_execute_dft(p_->a0b, fc(rho), fc(rho));
  fftw_execute_dft(p_->a1f, fc(rho), fc(rho));
  rho /= static_cast<double>(n_);
}

// ---------------------------------------------------------------- SseEngine

SseEngine::SseEngine(const Grid& g, const ModelParams& m, double dt)
    : g_(g),
      m_(m),
      dt_(dt),
      s2k_(std::sqrt(2.0 * m.k)),
      s2b_(std::sqrt(2.0 * m.beta)),
      v_(g.n),
      kin_half_(g.n),
      pot_base_(g.n),
      fft_(g.n) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (m.k < 0.0 || m.beta < 0.0) throw ConfigError("k and beta must be >= 0");
  const cplx im(0.0, 1.0);
  for (int j = 0; j < g_.n; ++j) {
    const double xj = g_.x[j];
    v_[j] = -m_.A * xj * xj + m_.B * xj * xj * xj * xj;
    kin_half_[j] = std::exp(-im * (g_.k[j] * g_.k[j] * 0.25 * dt_));
    pot_base_[j] = std::exp(-im * (v_[j] * dt_));
  }
}

double SseEngine::mean_x(const VectorXcd& psi) const {
  double num = 0.0, den = 0.0;
  for (int j = 0; j < g_.n; ++j) {
    const double w = std::norm(psi[j]);
    num += g_.x[j] * w;
    den += w;
  }
  return num / den;
}

double SseEngine::var_x(const VectorXcd& psi) const {
  double num = 0.0, num2 = 0.0, den = 0.0;
  for (int j = 0; j < g_.n; ++j) {
    const double w = std::norm(psi[j]);
    num += g_.x[j] * w;
    num2 += g_.x[j] * g_.x[j] * w;
    den += w;
  }
  const double m = num / den;
  return num2 / den - m * m;
}

double SseEngine::mean_p(const VectorXcd& psi) {
  VectorXcd ph = psi;
  fft_.vec_forward(ph);
  double num = 0.0, den = 0.0;
  for (int j = 0; j < g_.n; ++j) {
    const double w = std::norm(ph[j]);
    num += g_.k[j] * w;
    den += w;
  }
  return num / den;
}

double SseEngine::energy(const VectorXcd& psi) {
  VectorXcd ph = psi;
  fft_.vec_forward(ph);
  double ke = 0.0, den = 0.0;
  for (int j = 0; j < g_.n; ++j) {
    const double w = std::norm(ph[j]);
    ke += 0.5 * g_.k[j] * g_.k[j] * w;
    den += w;
  }
  double pe = 0.0, denx = 0.0;
  for (int j = 0; j < g_.n; ++j) {
    const double w = std::norm(psi[j]);
    pe += v_[j] * w;
    denx += w;
  }
  return ke / den + pe / denx;
}

SseEngine::StepResult SseEngine::step(VectorXcd& psi, double u, double dW0,
                                      double dW1) {
  const double xm_pre = mean_x(psi);

  fft_.vec_forward(psi);
  psi.array() *= kin_half_.array();
  fft_.vec_backward(psi);
  for (int j = 0; j < g_.n; ++j)
    psi[j] *= pot_base_[j] * std::polar(1.0, u * g_.x[j] * dt_);
  fft_.vec_forward(psi);
  psi.array() *= kin_half_.array();
  fft_.vec_backward(psi);

  const double m = mean_x(psi);
  const double kb = m_.k + m_.beta;
  for (int j = 0; j < g_.n; ++j) {
    const double d = g_.x[j] - m;
    const double z0 = s2k_ * d * dW0;
    const double z1 = s2b_ * d * dW1;
    psi[j] *= std::exp(-kb * d * d * dt_ + z0 - 0.5 * z0 * z0 + z1 -
                       0.5 * z1 * z1);
  }
  const double norm_pre = psi.norm();
  if (!(norm_pre > 1e-6) || !std::isfinite(norm_pre))
    throw IntegrationError("state norm collapsed during step");
  psi /= norm_pre;
  return {xm_pre, norm_pre};
}

// ---------------------------------------------------------------- SmeEngine

SmeEngine::SmeEngine(const Grid& g, const ModelParams& m, double dt)
    : g_(g),
      m_(m),
      dt_(dt),
      s2k_(std::sqrt(2.0 * m.k)),
      v_(g.n),
      kin_half_(g.n),
      pot_base_(g.n),
      deph_(g.n, g.n),
      fft_(g.n) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (m.k < 0.0 || m.beta < 0.0) throw ConfigError("k and beta must be >= 0");
  const cplx im(0.0, 1.0);
  for (int j = 0; j < g_.n; ++j) {
    const double xj = g_.x[j];
    v_[j] = -m_.A * xj * xj + m_.B * xj * xj * xj * xj;
    kin_half_[j] = std::exp(-im * (g_.k[j] * g_.k[j] * 0.25 * dt_));
    pot_base_[j] = std::exp(-im * (v_[j] * dt_));
  }
  const double r = 2.0 * (m_.k + m_.beta) * dt_;
  for (int jj = 0; jj < g_.n; ++jj)
    for (int ii = 0; ii < g_.n; ++ii) {
      const double d = g_.x[ii] - g_.x[jj];
      deph_(ii, jj) = std::exp(-0.5 * r * d * d);
    }
}

void SmeEngine::step(MatrixXcd& rho, double u, double dW) {
  // split-operator unitary conjugation
  fft_.to_momentum(rho);
  for (int jj = 0; jj < g_.n; ++jj)
    for (int ii = 0; ii < g_.n; ++ii)
      rho(ii, jj) *= kin_half_[ii] * std::conj(kin_half_[jj]);
  fft_.to_position(rho);
  VectorXcd pphase(g_.n);
  for (int j = 0; j < g_.n; ++j)
    pphase[j] = pot_base_[j] * std::polar(1.0, u * g_.x[j] * dt_);
  for (int jj = 0; jj < g_.n; ++jj) {
    const cplx pj = std::conj(pphase[jj]);
    for (int ii = 0; ii < g_.n; ++ii) rho(ii, jj) *= pphase[ii] * pj;
  }
  fft_.to_momentum(rho);
  for (int jj = 0; jj < g_.n; ++jj)
    for (int ii = 0; ii < g_.n; ++ii)
      rho(ii, jj) *= kin_half_[ii] * std::conj(kin_half_[jj]);
  fft_.to_position(rho);

  // dephasing and conditioning, elementwise in position
  double m = 0.0, tr = 0.0;
  for (int j = 0; j < g_.n; ++j) {
    const double d = rho(j, j).real();
    m += g_.x[j] * d;
    tr += d;
  }
  m /= tr;
  if (dW == 0.0) {
    for (int jj = 0; jj < g_.n; ++jj)
      for (int ii = 0; ii < g_.n; ++ii) rho(ii, jj) *= deph_(ii, jj);
  } else {
    for (int jj = 0; jj < g_.n; ++jj)
      for (int ii = 0; ii < g_.n; ++ii) {
        const double z = s2k_ * (g_.x[ii] + g_.x[jj] - 2.0 * m) * dW;
        rho(ii, jj) *= deph_(ii, jj) * std::exp(z - 0.5 * z * z);
      }
  }

  rho = 0.5 * (rho + rho.adjoint()).eval();
  double tr2 = 0.0;
  for (int j = 0; j < g_.n; ++j) tr2 += rho(j, j).real();
  if (!(tr2 > 1e-12) || !std::isfinite(tr2))
    throw IntegrationError("density trace collapsed during step");
  rho /= tr2;
}

MatrixXcd SmeEngine::momentum_rep(const MatrixXcd& rho) {
  MatrixXcd rp = rho;
  fft_.to_momentum(rp);
  return rp;
}

SmeEngine::Moments SmeEngine::moments(const MatrixXcd& rho) {
  Moments out{};
  double mx = 0.0, x2 = 0.0, pe = 0.0, trx = 0.0;
  for (int j = 0; j < g_.n; ++j) {
    const double d = rho(j, j).real();
    mx += g_.x[j] * d;
    x2 += g_.x[j] * g_.x[j] * d;
    pe += v_[j] * d;
    trx += d;
  }
  mx /= trx;
  x2 /= trx;
  pe /= trx;

  MatrixXcd rp = momentum_rep(rho);
  double mp = 0.0, p2 = 0.0, trp = 0.0;
  for (int j = 0; j < g_.n; ++j) {
    const double d = rp(j, j).real();
    mp += g_.k[j] * d;
    p2 += g_.k[j] * g_.k[j] * d;
    trp += d;
  }
  mp /= trp;
  p2 /= trp;

  // symmetric cross moment via M = (x_i + x_j)/2 .* rho in the momentum rep
  MatrixXcd xr(g_.n, g_.n);
  for (int jj = 0; jj < g_.n; ++jj)
    for (int ii = 0; ii < g_.n; ++ii)
      xr(ii, jj) = 0.5 * (g_.x[ii] + g_.x[jj]) * rho(ii, jj);
  fft_.to_momentum(xr);
  double xp = 0.0;
  for (int j = 0; j < g_.n; ++j) xp += g_.k[j] * xr(j, j).real();
  xp /= trx;

  out.x = mx;
  out.p = mp;
  out.vx = x2 - mx * mx;
  out.vp = p2 - mp * mp;
  out.c = xp - mx * mp;
  out.energy = 0.5 * p2 + pe;
  out.purity = purity_of(rho);
  return out;
}

// ------------------------------------------------------- MomentumSmeEngine

MomentumSmeEngine::MomentumSmeEngine(const Grid& g, double k_meas, double beta,
                                     double dt)
    : g_(g),
      km_(k_meas),
      beta_(beta),
      dt_(dt),
      s2k_(std::sqrt(2.0 * k_meas)),
      hphase_(g.n, g.n),
      deph_(g.n, g.n),
      fft_(g.n) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  const cplx im(0.0, 1.0);
  const double r = 2.0 * (km_ + beta_) * dt_;
  for (int jj = 0; jj < g_.n; ++jj)
    for (int ii = 0; ii < g_.n; ++ii) {
      const double hi = 0.5 * g_.k[ii] * g_.k[ii];
      const double hj = 0.5 * g_.k[jj] * g_.k[jj];
      hphase_(ii, jj) = std::exp(-im * ((hi - hj) * dt_));
      const double d = g_.k[ii] - g_.k[jj];
      deph_(ii, jj) = std::exp(-0.5 * r * d * d);
    }
}

MatrixXcd MomentumSmeEngine::initial_density(const VectorXcd& psi_position) {
  VectorXcd ph = psi_position;
  fft_.vec_forward(ph);
  ph /= ph.norm();
  return ph * ph.adjoint();
}

void MomentumSmeEngine::step(MatrixXcd& rho_p, double dW) {
  double m = 0.0, tr = 0.0;
  for (int j = 0; j < g_.n; ++j) {
    const double d = rho_p(j, j).real();
    m += g_.k[j] * d;
    tr += d;
  }
  m /= tr;
  for (int jj = 0; jj < g_.n; ++jj)
    for (int ii = 0; ii < g_.n; ++ii) {
      const double z = s2k_ * (g_.k[ii] + g_.k[jj] - 2.0 * m) * dW;
      rho_p(ii, jj) *= hphase_(ii, jj) * deph_(ii, jj) * std::exp(z - 0.5 * z * z);
    }
  rho_p = 0.5 * (rho_p + rho_p.adjoint()).eval();
  double tr2 = 0.0;
  for (int j = 0; j < g_.n; ++j) tr2 += rho_p(j, j).real();
  if (!(tr2 > 1e-12) || !std::isfinite(tr2))
    throw IntegrationError("density trace collapsed during step");
  rho_p /= tr2;
}

MomentumSmeEngine::Moments MomentumSmeEngine::moments(const MatrixXcd& rho_p) {
  Moments out{};
  double mp = 0.0, p2 = 0.0, tr = 0.0;
  for (int j = 0; j < g_.n; ++j) {
    const double d = rho_p(j, j).real();
    mp += g_.k[j] * d;
    p2 += g_.k[j] * g_.k[j] * d;
    tr += d;
  }
  mp /= tr;
  p2 /= tr;
  MatrixXcd rx = rho_p;
  fft_.to_position(rx);
  double mx = 0.0, x2 = 0.0, trx = 0.0;
  for (int j = 0; j < g_.n; ++j) {
    const double d = rx(j, j).real();
    mx += g_.x[j] * d;
    x2 += g_.x[j] * g_.x[j] * d;
    trx += d;
  }
  mx /= trx;
  x2 /= trx;
  out.p = mp;
  out.vp = p2 - mp * mp;
  out.x = mx;
  out.vx = x2 - mx * mx;
  return out;
}

}  // namespace qfc
