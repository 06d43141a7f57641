#include "grid.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace qfc {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(const GridSpec& spec) : n(spec.n), x_max(spec.x_max) {
  if (n < 16 || !power_of_two(n))
    throw ConfigError("grid n must be a power of two >= 16");
  if (!(x_max > 0.0)) throw ConfigError("grid x_max must be positive");
  dx = 2.0 * x_max / n;
  x.resize(n);
  k.resize(n);
  const double dk = 2.0 * std::numbers::pi / (n * dx);
  for (int j = 0; j < n; ++j) {
    x[j] = -x_max + dx * j;
    const int m = (j < n / 2) ? j : j - n;
    k[j] = dk * m;
  }
  k[n / 2] = 0.0;
}

MatrixXcd position_op(const Grid& g) {
  MatrixXcd op = MatrixXcd::Zero(g.n, g.n);
  for (int j = 0; j < g.n; ++j) op(j, j) = g.x[j];
  return op;
}

MatrixXcd momentum_op(const Grid& g) {
  // p = F^-1 diag(k) F with the DFT matrix F_mj = exp(-2 pi i m j / n).
  const int n = g.n;
  const cplx im(0.0, 1.0);
  MatrixXcd f(n, n);
  const double w = -2.0 * std::numbers::pi / n;
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j)
      f(m, j) = std::exp(im * (w * m * j));
  MatrixXcd kd = MatrixXcd::Zero(n, n);
  for (int m = 0; m < n; ++m) kd(m, m) = g.k[m];
  return f.adjoint() * kd * f / static_cast<double>(n);
}

MatrixXcd potential_op(const Grid& g, double A, double B) {
  MatrixXcd op = MatrixXcd::Zero(g.n, g.n);
  for (int j = 0; j < g.n; ++j) {
    const double xj = g.x[j];
    op(j, j) = -A * xj * xj + B * xj * xj * xj * xj;
  }
  return op;
}

MatrixXcd hamiltonian_op(const Grid& g, double A, double B) {
  const MatrixXcd p = momentum_op(g);
  return 0.5 * p * p + potential_op(g, A, B);
}

MatrixXcd d_super(const MatrixXcd& a, const MatrixXcd& rho) {
  const MatrixXcd ada = a.adjoint() * a;
  return a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada);
}

MatrixXcd h_super(const MatrixXcd& lam, const MatrixXcd& rho) {
  const MatrixXcd s = lam * rho + rho * lam.adjoint();
  const cplx tr = (lam * rho + rho * lam.adjoint()).trace();
  return s - tr.real() * rho;
}

cplx expect(const MatrixXcd& op, const VectorXcd& psi) {
  return psi.dot(op * psi) / psi.squaredNorm();
}

cplx expect(const MatrixXcd& op, const MatrixXcd& rho) {
  return (op * rho).trace() / rho.trace();
}

VectorXcd gaussian_packet(const Grid& g, double x0, double p0, double vx) {
  if (!(vx > 0.0)) throw ConfigError("gaussian packet needs vx > 0");
  VectorXcd psi(g.n);
  const cplx im(0.0, 1.0);
  for (int j = 0; j < g.n; ++j) {
    const double d = g.x[j] - x0;
    psi[j] = std::exp(-d * d / (4.0 * vx) + im * (p0 * d));
  }
  psi /= psi.norm();
  return psi;
}

double QuantumState::norm() const {
  return pure() ? psi.norm() : rho.trace().real();
}

void QuantumState::normalize() {
  if (pure()) {
    const double n = psi.norm();
    if (n < 1e-6) throw IntegrationError("state norm collapsed");
    psi /= n;
  } else {
    const double t = rho.trace().real();
    if (t < 1e-12) throw IntegrationError("state trace collapsed");
    rho /= t;
  }
}

MatrixXcd QuantumState::density() const {
  if (pure()) return psi * psi.adjoint() / psi.squaredNorm();
  return rho / rho.trace();
}

double QuantumState::purity() const {
  if (pure()) return 1.0;
  return purity_of(rho);
}

double purity_of(const MatrixXcd& rho) {
  const double tr = rho.trace().real();
  return rho.squaredNorm() / (tr * tr);
}

double min_eigenvalue(const MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (rho + rho.adjoint()),
                                              Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void check_physical(const MatrixXcd& rho) {
  if (!rho.allFinite()) throw IntegrationError("non-finite density matrix");
  if (min_eigenvalue(rho) < -1e-6)
    throw IntegrationError("density matrix negativity beyond tolerance");
}

}  // namespace qfc
