#include <doctest.h>

#include <random>

#include "spinfact/expm.hpp"
#include "spinfact/minimize.hpp"

using namespace spinfact;

TEST_CASE("pade exponential matches the closed form for a rotation block") {
  Eigen::MatrixXd a(2, 2);
  const double t = 0.813;
  a << 0, -t, t, 0;
  Eigen::MatrixXd e = expm(a);
  CHECK(e(0, 0) == doctest::Approx(std::cos(t)).epsilon(1e-14));
  CHECK(e(1, 0) == doctest::Approx(std::sin(t)).epsilon(1e-14));
  CHECK(e(0, 1) == doctest::Approx(-std::sin(t)).epsilon(1e-14));
}

TEST_CASE("pade and eigendecomposition routes agree on random anti-Hermitian input") {
  std::mt19937 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 8 + 4 * trial;
    Eigen::MatrixXcd m(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
    }
    Eigen::MatrixXcd a = m - m.adjoint();  // anti-Hermitian, norm O(n)
    Eigen::MatrixXcd e1 = expm(a);
    Eigen::MatrixXcd e2 = expm_antihermitian(a);
    CHECK((e1 - e2).cwiseAbs().maxCoeff() < 1e-12);
    // unitarity of the result
    CHECK((e1 * e1.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("scaling path handles large norms") {
  Eigen::MatrixXd a(3, 3);
  a << 0, -9, 2, 9, 0, -5, -2, 5, 0;
  Eigen::MatrixXd forward = expm(a);
  Eigen::MatrixXd backward = expm(Eigen::MatrixXd(-a));
  CHECK((forward * backward - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cached eigendecomposition evaluates exp(tA) at several t") {
  Eigen::MatrixXcd a(2, 2);
  a << Complex(0, 1), Complex(0.5, 0), Complex(-0.5, 0), Complex(0, -1);
  AntiHermitianExp cache(a);
  for (double t : {-1.3, 0.0, 0.4, 2.0}) {
    Eigen::MatrixXcd want = expm(Eigen::MatrixXcd(t * a));
    CHECK((cache.at(t) - want).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("bfgs minimizes the rosenbrock function") {
  auto rosenbrock = [](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    if (grad != nullptr) {
      grad->resize(2);
      (*grad)[0] = -2.0 * a - 400.0 * x[0] * b;
      (*grad)[1] = 200.0 * b;
    }
    return a * a + 100.0 * b * b;
  };
  MinimizeOptions opts;
  opts.f_target = 1e-16;
  MinimizeResult res = bfgs(rosenbrock, Eigen::Vector2d(-1.2, 1.0), opts);
  CHECK(res.converged);
  CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-6));
}
