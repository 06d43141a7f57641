#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "grid.hpp"
#include "rng.hpp"
#include "sde.hpp"

using namespace qfc;

namespace {

MatrixXcd random_matrix(const GaussianStream& gs, std::uint64_t base, int n) {
  MatrixXcd m(n, n);
  std::uint64_t idx = base;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = gs.normal(idx);
      const double im = gs.normal(idx + 1);
      idx += 2;
      m(i, j) = cplx(re, im);
    }
  return m;
}

MatrixXcd random_density(const GaussianStream& gs, std::uint64_t base, int n) {
  const MatrixXcd m = random_matrix(gs, base, n);
  MatrixXcd rho = m * m.adjoint();
  rho /= rho.trace().real();
  return rho;
}

}  // namespace

TEST_CASE("grid construction rejects bad shapes") {
  CHECK_THROWS_AS(Grid({0, 8.0}), ConfigError);
  CHECK_THROWS_AS(Grid({8, 8.0}), ConfigError);
  CHECK_THROWS_AS(Grid({100, 8.0}), ConfigError);
  CHECK_THROWS_AS(Grid({256, 0.0}), ConfigError);
  CHECK_THROWS_AS(Grid({256, -1.0}), ConfigError);
  CHECK_NOTHROW(Grid({16, 1.0}));
}

TEST_CASE("grid tables") {
  const Grid g({16, 8.0});
  CHECK(g.dx == doctest::Approx(1.0));             // 2 * 8 / 16
  CHECK(g.x(0) == doctest::Approx(-8.0));
  CHECK(g.x(15) == doctest::Approx(7.0));
  CHECK(g.k(0) == doctest::Approx(0.0));
  CHECK(g.k(1) == doctest::Approx(2.0 * M_PI / 16.0));
  CHECK(g.k(15) == doctest::Approx(-2.0 * M_PI / 16.0));
  CHECK(g.k(8) == doctest::Approx(0.0));           // zeroed Nyquist bin
}

TEST_CASE("position operator is the coordinate diagonal") {
  const Grid g({32, 4.0});
  const MatrixXcd xop = position_op(g);
  for (int i = 0; i < g.n; ++i) {
    CHECK(xop(i, i).real() == doctest::Approx(g.x(i)));
    CHECK(xop(i, i).imag() == doctest::Approx(0.0));
  }
  CHECK((xop - MatrixXcd(xop.diagonal().asDiagonal())).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0));
}

TEST_CASE("momentum operator is Hermitian and reads the packet momentum") {
  const Grid g({256, 8.0});
  const MatrixXcd pop = momentum_op(g);
  CHECK((pop - pop.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  const VectorXcd psi = gaussian_packet(g, 0.0, 1.3, 0.5);
  CHECK(expect(pop, psi).real() == doctest::Approx(1.3).epsilon(1e-8));
}

TEST_CASE("gaussian packet carries the requested moments") {
  const Grid g({256, 10.0});
  const double x0 = -1.2, p0 = 0.8, vx = 0.5;
  const VectorXcd psi = gaussian_packet(g, x0, p0, vx);
  double nrm = 0.0, mx = 0.0, mx2 = 0.0;
  for (int j = 0; j < g.n; ++j) {
    const double w = std::norm(psi(j));
    nrm += w;
    mx += g.x(j) * w;
    mx2 += g.x(j) * g.x(j) * w;
  }
  CHECK(nrm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mx == doctest::Approx(x0).epsilon(1e-10));
  CHECK(mx2 - mx * mx == doctest::Approx(vx).epsilon(1e-8));
  const MatrixXcd pop = momentum_op(g);
  CHECK(expect(pop, psi).real() == doctest::Approx(p0).epsilon(1e-8));
  const MatrixXcd p2 = pop * pop;
  const double vp = expect(p2, psi).real() - p0 * p0;
  CHECK(vp == doctest::Approx(1.0 / (4.0 * vx)).epsilon(1e-6));
}

TEST_CASE("dissipator equals the double-commutator form for Hermitian jumps") {
  const GaussianStream gs(111, 0);
  for (int inst = 0; inst < 20; ++inst) {
    const int n = 6;
    MatrixXcd a = random_matrix(gs, 10000u * inst, n);
    a = MatrixXcd(0.5 * (a + a.adjoint()));  // Hermitian jump operator
    const MatrixXcd rho = random_density(gs, 10000u * inst + 5000u, n);
    const MatrixXcd lhs = d_super(a, rho);
    const MatrixXcd comm = a * rho - rho * a;
    const MatrixXcd rhs = MatrixXcd(-0.5 * (a * comm - comm * a));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("measurement superoperator is traceless and matches naive loops") {
  const GaussianStream gs(222, 0);
  for (int inst = 0; inst < 20; ++inst) {
    const int n = 5;
    const MatrixXcd lam = random_matrix(gs, 20000u * inst, n);
    const MatrixXcd rho = random_density(gs, 20000u * inst + 7000u, n);
    const MatrixXcd out = h_super(lam, rho);
    CHECK(std::abs(out.trace()) < 1e-12);
    // naive elementwise reconstruction
    cplx tr(0.0, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        tr += (lam(i, j) + std::conj(lam(j, i))) * rho(j, i);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cplx v(0.0, 0.0);
        for (int m = 0; m < n; ++m)
          v += lam(i, m) * rho(m, j) + rho(i, m) * std::conj(lam(j, m));
        v -= tr.real() * rho(i, j);
        CHECK(std::abs(v - out(i, j)) < 1e-12);
      }
  }
}

TEST_CASE("state container handles pure and mixed forms") {
  const Grid g({64, 6.0});
  QuantumState pure;
  pure.psi = gaussian_packet(g, 0.0, 0.0, 0.5);
  CHECK(pure.pure());
  CHECK(pure.norm() == doctest::Approx(1.0));
  CHECK(pure.purity() == doctest::Approx(1.0));
  const MatrixXcd rho = pure.density();
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  CHECK(purity_of(rho) == doctest::Approx(1.0).epsilon(1e-10));

  QuantumState mixed;
  mixed.rho = MatrixXcd(0.5 * (gaussian_packet(g, -2.0, 0.0, 0.5) *
                               gaussian_packet(g, -2.0, 0.0, 0.5).adjoint()) +
                        0.5 * (gaussian_packet(g, 2.0, 0.0, 0.5) *
                               gaussian_packet(g, 2.0, 0.0, 0.5).adjoint()));
  CHECK_FALSE(mixed.pure());
  CHECK(mixed.norm() == doctest::Approx(1.0));
  // equal two-packet mixture: purity = (1 + |<a|b>|^2) / 2, overlap e^{-4}
  CHECK(mixed.purity() ==
        doctest::Approx(0.5 * (1.0 + std::exp(-8.0))).epsilon(1e-6));
  CHECK(min_eigenvalue(mixed.rho) > -1e-12);
  CHECK_NOTHROW(check_physical(mixed.rho));

  MatrixXcd unphysical = mixed.rho;
  unphysical(0, 0) -= 1e-3;
  CHECK_THROWS_AS(check_physical(unphysical), IntegrationError);
}

TEST_CASE("counter rng is reproducible and random access") {
  const GaussianStream a(12345, 3);
  const GaussianStream b(12345, 3);
  const GaussianStream c(12345, 4);
  CHECK(a.normal(0) == b.normal(0));
  CHECK(a.normal(1000000u) == b.normal(1000000u));
  CHECK(a.normal(0) != c.normal(0));
  // order independence
  const double x9 = a.normal(9);
  (void)a.normal(2);
  (void)a.normal(7);
  CHECK(a.normal(9) == x9);
  CHECK(GaussianStream(1, 0).normal(0) != GaussianStream(2, 0).normal(0));
}

TEST_CASE("normal draws have standard moments") {
  const GaussianStream gs(777, 0);
  const int m = 1000000;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double z = gs.normal(i);
    s1 += z;
    s2 += z * z;
    s3 += z * z * z;
    s4 += z * z * z * z;
  }
  s1 /= m;
  s2 /= m;
  s3 /= m;
  s4 /= m;
  CHECK(std::abs(s1) < 0.005);
  CHECK(std::abs(s2 - 1.0) < 0.01);
  CHECK(std::abs(s3) < 0.02);
  CHECK(std::abs(s4 - 3.0) < 0.06);
}

TEST_CASE("wiener increments scale the unit draws") {
  const GaussianStream gs(5, 9);
  const double dt = 0.01;
  const Eigen::VectorXd w = wiener_increments(gs, 40, 6, dt);
  for (int i = 0; i < 6; ++i)
    CHECK(w(i) == gs.normal(40 + i) * std::sqrt(dt));
}

TEST_CASE("explicit step reproduces the hand formula") {
  using Vec = Eigen::Matrix<double, 1, 1>;
  Vec x;
  x << 2.0;
  const auto drift = [](double, const Vec& v) { return Vec(-0.5 * v); };
  const auto diff = [](double, const Vec& v) { return Vec(0.3 * v); };
  Vec dw;
  dw << 0.02;
  const Vec out = em_step(x, 0.0, 0.1, dw, drift, diff);
  CHECK(out(0) == doctest::Approx(2.0 - 0.5 * 2.0 * 0.1 + 0.3 * 2.0 * 0.02)
                      .epsilon(1e-15));
}

TEST_CASE("multiplicative noise keeps the martingale mean") {
  // dX = X dW has E[X_T] = X0 for the explicit scheme at any dt
  using Vec = Eigen::Matrix<double, 1, 1>;
  const int paths = 60000, steps = 100;
  const double dt = 0.01, sq = std::sqrt(dt);
  double acc = 0.0;
  const auto drift = [](double, const Vec&) { return Vec(Vec::Zero()); };
  const auto diff = [](double, const Vec& v) { return v; };
  for (int p = 0; p < paths; ++p) {
    const GaussianStream gs(31415, p);
    Vec x;
    x << 1.0;
    for (int i = 0; i < steps; ++i) {
      Vec dw;
      dw << gs.wiener(i, sq);
      x = em_step(x, i * dt, dt, dw, drift, diff);
    }
    acc += x(0);
  }
  CHECK(std::abs(acc / paths - 1.0) < 0.016);
}

TEST_CASE("weak error halves with the step size on the linear test problem") {
  // dX = -X dt + dW from X0 = 2; E[X_1] = 2/e, Euler mean = 2 (1 - dt)^{1/dt}
  using Vec = Eigen::Matrix<double, 1, 1>;
  const int paths = 160000;
  const auto drift = [](double, const Vec& v) { return Vec(-v); };
  const auto diff = [](double, const Vec&) { return Vec(Vec::Ones()); };
  const double exact = 2.0 * std::exp(-1.0);
  double bias[2] = {0.0, 0.0};
  const double dts[2] = {0.1, 0.05};
  for (int c = 0; c < 2; ++c) {
    const double dt = dts[c], sq = std::sqrt(dt);
    const int steps = static_cast<int>(std::lround(1.0 / dt));
    double acc = 0.0;
    for (int p = 0; p < paths; ++p) {
      const GaussianStream gs(999 + c, p);
      Vec x;
      x << 2.0;
      for (int i = 0; i < steps; ++i) {
        Vec dw;
        dw << gs.wiener(i, sq);
        x = em_step(x, i * dt, dt, dw, drift, diff);
      }
      acc += x(0);
    }
    bias[c] = acc / paths - exact;
  }
  CHECK(std::abs(bias[0]) > 1e-3);  // resolvable against MC noise
  const double ratio = std::abs(bias[1]) / std::abs(bias[0]);
  CHECK(ratio > 0.3);
  CHECK(ratio < 0.8);
}
