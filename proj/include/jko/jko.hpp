#pragma once

#include <Eigen/Dense>
#include <vector>

#include "jko/basis.hpp"
#include "jko/functional.hpp"
#include "jko/lagrangian.hpp"
#include "jko/model.hpp"
#include "jko/newton.hpp"
#include "jko/quadrature.hpp"

namespace jko {

struct JkoConfig {
  int d = 2;
  int K = 8;
  double tau = 5e-4;
  double T = 0.01;
  double tol = 1e-8;  // Newton gradient tolerance
  int max_newton = 100;
  double backtrack_factor = 0.5;
  int max_backtracks = 60;
  int quad_cells = 0;   // cells per direction; 0 means 2K
  int quad_points = 2;  // Gauss points per cell and direction
  bool track_maps = false;  // carry map derivatives for velocity diagnostics
  int threads = 1;
};

// ceil(T/tau) with a guard against ties like 0.01/5e-4 landing above an integer.
int step_count(double T, double tau);

/// Minimizing-movement time stepper: rebuild basis tables at the current
/// particle positions, minimize the step objective by damped Newton from z=0,
/// advance the state, repeat. With track_maps on, the Lagrangian velocity and
/// the Euler-Lagrange residual of a converged increment are available.
class JkoSolver {
 public:
  JkoSolver(const JkoConfig& cfg, const PressureModel& model, const Potential& pot,
            const ScalarField& u0);
  JkoSolver(const JkoSolver&) = delete;
  JkoSolver& operator=(const JkoSolver&) = delete;

  const JkoConfig& config() const { return cfg_; }
  const QuadratureGrid& grid() const { return grid_; }
  const IndexSet& modes() const { return modes_; }
  const LagrangianState& state() const { return state_; }
  const std::vector<double>& entropy_history() const { return state_.entropy_history; }
  double entropy() const { return state_.entropy_history.back(); }
  const Eigen::VectorXd& last_increment() const { return zlast_; }

  // Applies a feasible increment outside the minimization (perturbed starts).
  void apply_increment(const Eigen::VectorXd& z);

  // One step; optionally evaluates the Euler-Lagrange residual of the
  // converged increment (requires track_maps) before the state advances.
  NewtonReport step(double* el_residual = nullptr);

  // ceil(T/tau) steps; throws with the step index on Newton failure.
  std::vector<NewtonReport> run(std::vector<double>* el_residuals = nullptr);

  // v(t; T^{n-1}) at every node for a feasible increment z on top of the
  // current state: -(1/ubar) div[ P(ubar/det B) B^# ] - (grad V)(t(x)), with
  // B the accumulated map derivative and divergence in reference coordinates.
  Eigen::MatrixXd velocity_field(const Eigen::VectorXd& z);

  // max_j | < disp/tau - v , grad b_j > | in the discrete pairing.
  double el_residual(const Eigen::VectorXd& z);

 private:
  JkoConfig cfg_;
  PressureModel model_;
  Potential pot_;
  ScalarField u0_;
  QuadratureGrid grid_;
  IndexSet modes_;
  LagrangianState state_;
  BasisTables tables_;
  int tables_step_ = -1;  // state_.n the tables were built at
  Eigen::VectorXd zlast_;

  void ensure_tables();
};

}  // namespace jko
