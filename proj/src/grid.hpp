#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace qfc {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  int n = 256;
  double x_max = 8.0;
};

// Uniform position grid on [-x_max, x_max) with the matching DFT wavenumber
// table. The Nyquist bin is zeroed so the momentum operator is Hermitian.
struct Grid {
  int n;
  double x_max;
  double dx;
  VectorXd x;
  VectorXd k;
  explicit Grid(const GridSpec& spec);
};

// Dense operators for oracle-scale work; the propagators use the spectral path.
MatrixXcd position_op(const Grid& g);
MatrixXcd momentum_op(const Grid& g);
MatrixXcd potential_op(const Grid& g, double A, double B);  // V = -A x^2 + B x^4
MatrixXcd hamiltonian_op(const Grid& g, double A, double B);

// Superoperators. d_super is the dissipator (2 A rho A+ - A+A rho - rho A+A)/2;
// h_super is the measurement superoperator L rho + rho L+ - tr[(L+L+) rho] rho.
MatrixXcd d_super(const MatrixXcd& a, const MatrixXcd& rho);
MatrixXcd h_super(const MatrixXcd& lam, const MatrixXcd& rho);

cplx expect(const MatrixXcd& op, const VectorXcd& psi);
cplx expect(const MatrixXcd& op, const MatrixXcd& rho);

// Minimum-uncertainty Gaussian wavepacket, normalized on the grid.
VectorXcd gaussian_packet(const Grid& g, double x0, double p0, double vx);

// Pure or mixed state; pure iff psi is nonempty.
struct QuantumState {
  VectorXcd psi;
  MatrixXcd rho;
  bool pure() const { return psi.size() > 0; }
  double norm() const;
  void normalize();
  MatrixXcd density() const;
  double purity() const;
};

double purity_of(const MatrixXcd& rho);

// Smallest eigenvalue; negative dust beyond -1e-6 is an integration failure.
double min_eigenvalue(const MatrixXcd& rho);
void check_physical(const MatrixXcd& rho);

}  // namespace qfc
