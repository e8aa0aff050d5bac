#pragma once

#include <functional>

#include <Eigen/Dense>

namespace spinfact {

/// Objective callback: returns f(x); fills *grad if non-null.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>;

struct MinimizeOptions {
  int max_iterations = 2000;
  double f_target = 1e-10;    // stop when f drops below this
  double grad_tol = 1e-9;     // stop when ||grad||_inf drops below this
  double step_tol = 1e-14;    // stop when the line search stalls
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double f = 0.0;
  double grad_norm = 0.0;  // infinity norm
  int iterations = 0;
  bool converged = false;  // hit f_target or grad_tol
};

/// BFGS with a backtracking Armijo line search and analytic gradients.
MinimizeResult bfgs(const Objective& objective, const Eigen::VectorXd& x0,
                    const MinimizeOptions& options = {});

}  // namespace spinfact
