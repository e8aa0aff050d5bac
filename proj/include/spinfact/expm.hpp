#pragma once

#include <Eigen/Dense>

#include "spinfact/fock.hpp"

namespace spinfact {

/// Matrix exponential by Pade approximation with scaling and squaring
/// (Higham's [13/13] scheme with the standard order-selection thresholds).
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

/// Independent route for anti-Hermitian A: diagonalize H = iA (Hermitian)
/// and form exp(A) = V diag(exp(-i lambda)) V^dag.  Used as a cross-check
/// oracle against the Pade route.
Eigen::MatrixXcd expm_antihermitian(const Eigen::MatrixXcd& a);

/// Cached eigendecomposition of iA for repeated exp(t A) evaluations.
struct AntiHermitianExp {
  Eigen::VectorXd eigenvalues;  // of H = iA
  Eigen::MatrixXcd vectors;

  explicit AntiHermitianExp(const Eigen::MatrixXcd& a);
  Eigen::MatrixXcd at(double t) const;  // exp(t A)
  /// Left-multiplies: u <- exp(t A) * u, without forming exp(t A).
  void apply_left(double t, Eigen::MatrixXcd& u) const;
};

}  // namespace spinfact
