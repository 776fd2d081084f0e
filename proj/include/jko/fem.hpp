#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <string>

#include "jko/model.hpp"

namespace jko {

struct FemConfig {
  int L = 200;             // lattice points per direction, spacing 1/(L-1)
  double tau = 5e-4;
  double newton_tol = 1e-10;  // Euclidean norm of the nonlinear residual
  int max_newton = 50;
  int max_halvings = 40;
};

/// Fully implicit Q1 reference solver on the unit square,
///   int (u - u^{n-1})/tau phi_k = -int [grad P(u) + u grad V] . grad phi_k,
/// with consistent mass matrix, 2x2 Gauss assembly per cell, and natural
/// no-flux boundary. Serial assembly in a fixed cell order keeps every run
/// bit-reproducible.
class FemSolver {
 public:
  FemSolver(const FemConfig& cfg, const PressureModel& model, const Potential& pot,
            const ScalarField& u0);

  int L() const { return cfg_.L; }
  double h() const { return h_; }
  double tau() const { return cfg_.tau; }
  double time() const { return static_cast<double>(nsteps_) * cfg_.tau; }
  int steps() const { return nsteps_; }
  const Eigen::VectorXd& values() const { return u_; }
  void set_values(const Eigen::VectorXd& u);  // keeps the clock

  void step();  // one implicit step; throws on Newton failure
  void advance_to(double T);

  double mass() const;     // sum_k u_k w_k with lattice weights; equals int u_h
  double entropy() const;  // lattice quadrature of h(u) + u V
  double min_value() const { return u_.minCoeff(); }

  // Multilinear interpolation; x is clamped into the closed unit square.
  double interpolate(const double* x) const;

  void write_snapshot_csv(const std::string& path) const;

 private:
  FemConfig cfg_;
  PressureModel model_;
  Potential pot_;
  double h_ = 0.0;
  int nsteps_ = 0;
  Eigen::VectorXd u_;
  Eigen::VectorXd lattice_w_;  // trapezoid weights = int phi_k

  Eigen::SparseMatrix<double> mass_mat_;  // consistent mass
  Eigen::SparseMatrix<double> adv_mat_;   // int phi_j grad V . grad phi_k
  std::vector<double> qp_gradV_;          // grad V cached per cell quad point
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  bool pattern_ready_ = false;

  void assemble_constant();
  // Residual R(u) = M (u - uold)/tau + S(u) and the diffusion Jacobian part.
  void residual(const Eigen::VectorXd& u, const Eigen::VectorXd& uold,
                Eigen::VectorXd& R, Eigen::SparseMatrix<double>* Kdiff) const;
};

}  // namespace jko
