#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "jko/basis.hpp"
#include "jko/lagrangian.hpp"
#include "jko/model.hpp"

namespace jko {

/// Objective of one minimizing-movement step over gradient increments
/// t = y + sum_j z_j grad b_j, A = I + sum_j z_j hess b_j:
///   F(z) = 1/(2 tau) sum_k |t_k - y_k|^2 ubar_k w_k
///        + sum_k [ h_*(sigma_k det A_k / ubar_k) + V(t_k) ] ubar_k w_k.
/// Gradient and Hessian are closed-form, assembled from the node tables by
/// dense matrix products. Bound to one state and one table set; rebuild after
/// every accepted step.
class StepFunctional {
 public:
  StepFunctional(const LagrangianState& state, const BasisTables& tables,
                 const PressureModel& model, const Potential& pot, double tau);

  std::size_t dim() const { return tables_.M; }
  bool feasible(const Eigen::VectorXd& z) const;

  // +infinity when some nodal determinant is nonpositive.
  double value(const Eigen::VectorXd& z) const;
  // Both assume a feasible z.
  void gradient(const Eigen::VectorXd& z, Eigen::VectorXd& g) const;
  void hessian(const Eigen::VectorXd& z, Eigen::MatrixXd& H) const;

  // Same objective in generic arithmetic, for the dual-number cross-checks.
  template <class T>
  T value_generic(const std::vector<T>& z) const;

 private:
  const LagrangianState& state_;
  const BasisTables& tables_;
  const PressureModel& model_;
  const Potential& pot_;
  double tau_;

  Eigen::VectorXd w_;   // ubar .* weight
  Eigen::VectorXd sw_;  // sigma .* weight
  Eigen::VectorXd su_;  // sigma ./ ubar

  void determinants(const Eigen::VectorXd& z, Eigen::ArrayXd& det, bool& ok) const;
};

template <class T>
T StepFunctional::value_generic(const std::vector<T>& z) const {
  const std::size_t N = state_.size();
  const std::size_t M = tables_.M;
  const int d = tables_.d;
  T F(0.0);
  for (std::size_t k = 0; k < N; ++k) {
    const auto ek = static_cast<Eigen::Index>(k);
    T disp[2] = {T(0.0), T(0.0)};
    for (int a = 0; a < d; ++a)
      for (std::size_t j = 0; j < M; ++j)
        disp[a] = disp[a] + tables_.G[a](ek, static_cast<Eigen::Index>(j)) * z[j];
    T det(1.0);
    if (d == 1) {
      T a0(0.0);
      for (std::size_t j = 0; j < M; ++j)
        a0 = a0 + tables_.H[0](ek, static_cast<Eigen::Index>(j)) * z[j];
      det = 1.0 + a0;
    } else {
      T a0(0.0), a1(0.0), a2(0.0);
      for (std::size_t j = 0; j < M; ++j) {
        const auto ej = static_cast<Eigen::Index>(j);
        a0 = a0 + tables_.H[0](ek, ej) * z[j];
        a1 = a1 + tables_.H[1](ek, ej) * z[j];
        a2 = a2 + tables_.H[2](ek, ej) * z[j];
      }
      det = (1.0 + a0) * (1.0 + a2) - a1 * a1;
    }
    T x[2] = {T(0.0), T(0.0)};
    for (int a = 0; a < d; ++a) x[a] = state_.pos[k * d + a] + disp[a];
    T nrm = disp[0] * disp[0];
    if (d == 2) nrm = nrm + disp[1] * disp[1];
    const double wk = w_[ek];
    F = F + (0.5 / tau_) * nrm * wk;
    F = F + model_.hs_t(su_[ek] * det) * wk;
    F = F + pot_.value_t(x) * wk;
  }
  return F;
}

}  // namespace jko
