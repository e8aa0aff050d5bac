#include "spinfact/minimize.hpp"

#include <cmath>

namespace spinfact {

MinimizeResult bfgs(const Objective& objective, const Eigen::VectorXd& x0,
                    const MinimizeOptions& options) {
  const Eigen::Index n = x0.size();
  MinimizeResult res;
  res.x = x0;

  Eigen::VectorXd grad(n);
  double f = objective(res.x, &grad);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    res.f = f;
    res.grad_norm = grad.size() > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;
    res.iterations = iter;
    if (f < options.f_target || res.grad_norm < options.grad_tol) {
      res.converged = true;
      return res;
    }

    Eigen::VectorXd dir = -(hinv * grad);
    double slope = grad.dot(dir);
    if (slope >= 0.0) {  // lost positive definiteness; reset
      hinv.setIdentity();
      dir = -grad;
      slope = grad.dot(dir);
    }

    // backtracking Armijo search
    double step = 1.0;
    double f_new = f;
    Eigen::VectorXd x_new, grad_new(n);
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = res.x + step * dir;
      f_new = objective(x_new, nullptr);
      if (f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
      if (step * dir.cwiseAbs().maxCoeff() < options.step_tol) break;
    }
    if (!accepted) {
      res.converged = false;
      return res;
    }

    f_new = objective(x_new, &grad_new);
    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd i = Eigen::MatrixXd::Identity(n, n);
      hinv = (i - rho * s * y.transpose()) * hinv * (i - rho * y * s.transpose()) +
             rho * s * s.transpose();
    }
    res.x = x_new;
    f = f_new;
    grad = grad_new;
  }

  res.f = f;
  res.grad_norm = grad.size() > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;
  res.iterations = options.max_iterations;
  res.converged = f < options.f_target || res.grad_norm < options.grad_tol;
  return res;
}

}  // namespace spinfact
