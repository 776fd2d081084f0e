#include "jko/functional.hpp"

#include <limits>
#include <stdexcept>

namespace jko {

StepFunctional::StepFunctional(const LagrangianState& state, const BasisTables& tables,
                               const PressureModel& model, const Potential& pot,
                               double tau)
    : state_(state), tables_(tables), model_(model), pot_(pot), tau_(tau) {
  if (tau <= 0.0) throw std::invalid_argument("StepFunctional: tau must be positive");
  if (tables.n != state.size())
    throw std::invalid_argument("StepFunctional: tables were built for a different grid");
  const QuadratureGrid& g = *state_.grid;
  const auto N = static_cast<Eigen::Index>(state_.size());
  w_.resize(N);
  sw_.resize(N);
  su_.resize(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const double ub = g.ubar[static_cast<std::size_t>(k)];
    const double sg = state_.sigma[static_cast<std::size_t>(k)];
    w_[k] = ub * g.weight[static_cast<std::size_t>(k)];
    sw_[k] = sg * g.weight[static_cast<std::size_t>(k)];
    su_[k] = sg / ub;
  }
}

void StepFunctional::determinants(const Eigen::VectorXd& z, Eigen::ArrayXd& det,
                                  bool& ok) const {
  if (tables_.d == 1) {
    det = 1.0 + (tables_.H[0] * z).array();
  } else {
    const Eigen::ArrayXd a0 = (tables_.H[0] * z).array();
    const Eigen::ArrayXd a1 = (tables_.H[1] * z).array();
    const Eigen::ArrayXd a2 = (tables_.H[2] * z).array();
    det = (1.0 + a0) * (1.0 + a2) - a1 * a1;
  }
  ok = (det > 0.0).all();
}

bool StepFunctional::feasible(const Eigen::VectorXd& z) const {
  Eigen::ArrayXd det;
  bool ok = false;
  determinants(z, det, ok);
  return ok;
}

double StepFunctional::value(const Eigen::VectorXd& z) const {
  Eigen::ArrayXd det;
  bool ok = false;
  determinants(z, det, ok);
  if (!ok) return std::numeric_limits<double>::infinity();
  const int d = tables_.d;
  const auto N = static_cast<Eigen::Index>(state_.size());

  const Eigen::ArrayXd d0 = (tables_.G[0] * z).array();
  Eigen::ArrayXd nrm = d0 * d0;
  Eigen::ArrayXd d1;
  if (d == 2) {
    d1 = (tables_.G[1] * z).array();
    nrm += d1 * d1;
  }
  double F = (0.5 / tau_) * (nrm * w_.array()).sum();

  for (Eigen::Index k = 0; k < N; ++k) F += model_.hs(su_[k] * det[k]) * w_[k];

  if (pot_.kind != PotKind::Zero) {
    double x[2];
    for (Eigen::Index k = 0; k < N; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      x[0] = state_.pos[uk * static_cast<std::size_t>(d)] + d0[k];
      if (d == 2) x[1] = state_.pos[uk * 2 + 1] + d1[k];
      F += pot_.value(x) * w_[k];
    }
  }
  return F;
}

void StepFunctional::gradient(const Eigen::VectorXd& z, Eigen::VectorXd& g) const {
  Eigen::ArrayXd det;
  bool ok = false;
  determinants(z, det, ok);
  if (!ok) throw std::domain_error("StepFunctional::gradient: infeasible point");
  const int d = tables_.d;
  const auto N = static_cast<Eigen::Index>(state_.size());

  const Eigen::ArrayXd d0 = (tables_.G[0] * z).array();
  g = (1.0 / tau_) * (tables_.G[0].transpose() * (w_.array() * d0).matrix());
  Eigen::ArrayXd d1;
  if (d == 2) {
    d1 = (tables_.G[1] * z).array();
    g += (1.0 / tau_) * (tables_.G[1].transpose() * (w_.array() * d1).matrix());
  }

  // d/dz_j of the internal energy: sum_k hs'(s_k) sigma_k w_k d(det A_k)/dz_j.
  Eigen::ArrayXd hw(N);
  for (Eigen::Index k = 0; k < N; ++k) hw[k] = sw_[k] * model_.dhs(su_[k] * det[k]);
  if (d == 1) {
    g += tables_.H[0].transpose() * hw.matrix();
  } else {
    const Eigen::ArrayXd A11 = 1.0 + (tables_.H[0] * z).array();
    const Eigen::ArrayXd A12 = (tables_.H[1] * z).array();
    const Eigen::ArrayXd A22 = 1.0 + (tables_.H[2] * z).array();
    g += tables_.H[0].transpose() * (A22 * hw).matrix();
    g += tables_.H[2].transpose() * (A11 * hw).matrix();
    g -= 2.0 * (tables_.H[1].transpose() * (A12 * hw).matrix());
  }

  if (pot_.kind != PotKind::Zero) {
    Eigen::MatrixXd pg(N, d);
    double x[2], gv[2];
    for (Eigen::Index k = 0; k < N; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      x[0] = state_.pos[uk * static_cast<std::size_t>(d)] + d0[k];
      if (d == 2) x[1] = state_.pos[uk * 2 + 1] + d1[k];
      pot_.grad(x, gv);
      for (int a = 0; a < d; ++a) pg(k, a) = w_[k] * gv[a];
    }
    for (int a = 0; a < d; ++a) g += tables_.G[a].transpose() * pg.col(a);
  }
}

void StepFunctional::hessian(const Eigen::VectorXd& z, Eigen::MatrixXd& H) const {
  Eigen::ArrayXd det;
  bool ok = false;
  determinants(z, det, ok);
  if (!ok) throw std::domain_error("StepFunctional::hessian: infeasible point");
  const int d = tables_.d;
  const auto N = static_cast<Eigen::Index>(state_.size());

  H = (1.0 / tau_) * (tables_.G[0].transpose() * w_.asDiagonal() * tables_.G[0]);
  if (d == 2)
    H += (1.0 / tau_) * (tables_.G[1].transpose() * w_.asDiagonal() * tables_.G[1]);

  Eigen::ArrayXd hw(N), c2(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const double s = su_[k] * det[k];
    hw[k] = sw_[k] * model_.dhs(s);
    c2[k] = sw_[k] * su_[k] * model_.d2hs(s);
  }
  if (d == 1) {
    H += tables_.H[0].transpose() * c2.matrix().asDiagonal() * tables_.H[0];
  } else {
    const Eigen::ArrayXd A11 = 1.0 + (tables_.H[0] * z).array();
    const Eigen::ArrayXd A12 = (tables_.H[1] * z).array();
    const Eigen::ArrayXd A22 = 1.0 + (tables_.H[2] * z).array();
    Eigen::MatrixXd cdot = A22.matrix().asDiagonal() * tables_.H[0];
    cdot += A11.matrix().asDiagonal() * tables_.H[2];
    cdot -= 2.0 * (A12.matrix().asDiagonal() * tables_.H[1]);
    H += cdot.transpose() * c2.matrix().asDiagonal() * cdot;
    // Curvature of det A itself; det is bilinear in z for d = 2.
    const Eigen::MatrixXd t02 =
        tables_.H[0].transpose() * hw.matrix().asDiagonal() * tables_.H[2];
    H += t02 + t02.transpose();
    H -= 2.0 * (tables_.H[1].transpose() * hw.matrix().asDiagonal() * tables_.H[1]);
  }

  if (pot_.kind != PotKind::Zero) {
    const Eigen::ArrayXd d0 = (tables_.G[0] * z).array();
    Eigen::ArrayXd d1;
    if (d == 2) d1 = (tables_.G[1] * z).array();
    Eigen::ArrayXd hv11(N), hv12(N), hv22(N);
    double x[2], hv[3];
    for (Eigen::Index k = 0; k < N; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      x[0] = state_.pos[uk * static_cast<std::size_t>(d)] + d0[k];
      if (d == 2) x[1] = state_.pos[uk * 2 + 1] + d1[k];
      pot_.hess(x, hv);
      hv11[k] = w_[k] * hv[0];
      if (d == 2) {
        hv12[k] = w_[k] * hv[1];
        hv22[k] = w_[k] * hv[2];
      }
    }
    H += tables_.G[0].transpose() * hv11.matrix().asDiagonal() * tables_.G[0];
    if (d == 2) {
      H += tables_.G[1].transpose() * hv22.matrix().asDiagonal() * tables_.G[1];
      const Eigen::MatrixXd cross =
          tables_.G[0].transpose() * hv12.matrix().asDiagonal() * tables_.G[1];
      H += cross + cross.transpose();
    }
  }

  // the X^T D X blocks are symmetric only up to roundoff once accumulated
  H = 0.5 * (H + H.transpose()).eval();
}

}  // namespace jko
