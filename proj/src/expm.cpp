#include "spinfact/expm.hpp"

#include <cmath>
#include <stdexcept>

namespace spinfact {

namespace {

// Higham, "The scaling and squaring method for the matrix exponential
// revisited": Pade orders 3, 5, 7, 9, 13 with 1-norm thresholds.
template <typename Mat>
Mat expm_impl(const Mat& a) {
  using Real = typename Mat::RealScalar;
  static const double theta[] = {1.495585217958292e-2, 2.539398330063230e-1,
                                 9.504178996162932e-1, 2.097847961257068e0,
                                 5.371920351148152e0};
  static const double pade3[] = {120, 60, 12, 1};
  static const double pade5[] = {30240, 15120, 3360, 420, 30, 1};
  static const double pade7[] = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
  static const double pade9[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                 2162160., 110880., 3960., 90., 1.};
  static const double pade13[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                                  1187353796428800.,  129060195264000.,   10559470521600.,
                                  670442572800.,      33522128640.,       1323241920.,
                                  40840800.,          960960.,            16380.,
                                  182.,               1.};

  const Eigen::Index n = a.rows();
  const Mat id = Mat::Identity(n, n);
  const Real norm = a.cwiseAbs().colwise().sum().maxCoeff();

  auto pade_uv = [&](const Mat& x, const double* b, int m, Mat& u, Mat& v) {
    const Mat x2 = x * x;
    Mat even = b[0] * id;  // b0 + b2 x^2 + ...
    Mat odd = b[1] * id;   // b1 + b3 x^2 + ... (times x later)
    Mat pow = id;
    for (int k = 2; k <= m; k += 2) {
      pow = pow * x2;
      even += b[k] * pow;
      if (k + 1 <= m) odd += b[k + 1] * pow;
    }
    u = x * odd;
    v = even;
  };

  Mat u, v;
  int squarings = 0;
  if (norm <= theta[4]) {
    const double* tables[] = {pade3, pade5, pade7, pade9};
    const int orders[] = {3, 5, 7, 9};
    bool done = false;
    for (int t = 0; t < 4 && !done; ++t) {
      if (norm <= theta[t]) {
        pade_uv(a, tables[t], orders[t], u, v);
        done = true;
      }
    }
    if (!done) pade_uv(a, pade13, 13, u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta[4]))));
    const Mat scaled = a / std::pow(2.0, squarings);
    pade_uv(scaled, pade13, 13, u, v);
  }

  Mat r = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) { return expm_impl<Eigen::MatrixXd>(a); }
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) { return expm_impl<Eigen::MatrixXcd>(a); }

Eigen::MatrixXcd expm_antihermitian(const Eigen::MatrixXcd& a) { return AntiHermitianExp(a).at(1.0); }

AntiHermitianExp::AntiHermitianExp(const Eigen::MatrixXcd& a) {
  const Eigen::MatrixXcd h = Complex(0.0, 1.0) * a;
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("matrix is not anti-Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  eigenvalues = es.eigenvalues();
  vectors = es.eigenvectors();
}

Eigen::MatrixXcd AntiHermitianExp::at(double t) const {
  Eigen::VectorXcd phases(eigenvalues.size());
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
    phases[k] = std::exp(Complex(0.0, -t * eigenvalues[k]));
  }
  return vectors * phases.asDiagonal() * vectors.adjoint();
}

void AntiHermitianExp::apply_left(double t, Eigen::MatrixXcd& u) const {
  Eigen::VectorXcd phases(eigenvalues.size());
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
    phases[k] = std::exp(Complex(0.0, -t * eigenvalues[k]));
  }
  u = vectors * (phases.asDiagonal() * (vectors.adjoint() * u));
}

}  // namespace spinfact
