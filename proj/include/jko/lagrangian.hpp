#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "jko/basis.hpp"
#include "jko/model.hpp"
#include "jko/quadrature.hpp"

namespace jko {

/// Iterated particle state of the composed transport map: pushed node
/// positions and accumulated Jacobian determinants, updated per step without
/// ever forming the composition. When track_maps is set, the full accumulated
/// first and second derivatives of the composed map are carried along for the
/// velocity diagnostics.
struct LagrangianState {
  const QuadratureGrid* grid = nullptr;  // not owned; must outlive the state
  int n = 0;
  std::vector<double> pos;    // size*d, current node positions
  std::vector<double> sigma;  // accumulated determinants, all positive
  std::vector<double> entropy_history;

  bool track_maps = false;
  std::vector<double> jac;   // size*d*d, row-major D(T) per node
  std::vector<double> hmap;  // size*d*hcomp, packed D²(T_i) per node

  std::size_t size() const { return sigma.size(); }
  int d() const { return grid->d; }
  int hcomp() const { return grid->d == 1 ? 1 : 3; }
};

LagrangianState make_identity_state(const QuadratureGrid& grid, bool track_maps = false);

// t(z, y_k) = y_k + sum_j z_j grad b_j(y_k); tables built at the current positions.
void transport_eval(const LagrangianState& s, const BasisTables& t,
                    const Eigen::VectorXd& z, std::size_t node, double* out);

// det(I + sum_j z_j hess b_j(y_k)); may be nonpositive (caller decides).
double jacobian_det(const BasisTables& t, const Eigen::VectorXd& z, std::size_t node);

bool increment_feasible(const BasisTables& t, const Eigen::VectorXd& z);

// Applies one increment: positions, determinants, step counter, tracked map
// derivatives; appends the entropy after the move. Infeasible z is rejected.
void advance_state(LagrangianState& s, const BasisTables& t, const Eigen::VectorXd& z,
                   const PressureModel& model, const Potential& pot);

// u^n(x_k^n) = ubar(x_k)/sigma_k^n.
std::vector<double> density_at_nodes(const LagrangianState& s);

// sum_k [h_*(sigma_k/ubar_k) + V(x_k^n)] ubar_k w_k.
double discrete_entropy(const LagrangianState& s, const PressureModel& model,
                        const Potential& pot);

// sqrt( sum_k |x_{A,k} - x_{B,k}|^2 ubar_k w_k ); states must share grid shape
// and step count.
double map_distance(const LagrangianState& a, const LagrangianState& b);

// Columns: id, reference coords, current coords, sigma, density.
void write_state_csv(const LagrangianState& s, const std::string& path);

}  // namespace jko
