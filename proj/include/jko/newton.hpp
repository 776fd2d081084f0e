#pragma once

#include <Eigen/Dense>
#include <limits>

#include "jko/functional.hpp"

namespace jko {

struct NewtonOptions {
  double tol = 1e-8;  // on the Euclidean gradient norm
  int max_iter = 100;
  double backtrack_factor = 0.5;
  int max_backtracks = 60;
};

struct NewtonReport {
  int iterations = 0;
  double grad_norm = std::numeric_limits<double>::quiet_NaN();
  int backtracks = 0;  // total over all iterations
  double min_eig_estimate = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
};

/// Damped Newton on the step objective, started from z = 0 (the identity
/// increment, always feasible). Steps are accepted only when every node
/// determinant stays positive and the objective strictly decreases; an
/// indefinite factorization is retried with a doubling diagonal shift.
NewtonReport newton_solve(const StepFunctional& F, Eigen::VectorXd& z,
                          const NewtonOptions& opt = {});

}  // namespace jko
