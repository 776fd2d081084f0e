#include "jko/jko.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace jko {

int step_count(double T, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("step_count: tau must be positive");
  if (T <= 0.0) return 0;
  return static_cast<int>(std::ceil(T / tau - 1e-9));
}

JkoSolver::JkoSolver(const JkoConfig& cfg, const PressureModel& model,
                     const Potential& pot, const ScalarField& u0)
    : cfg_(cfg),
      model_(model),
      pot_(pot),
      u0_(u0),
      grid_(build_gauss_grid(cfg.d, cfg.quad_cells > 0 ? cfg.quad_cells : 2 * cfg.K,
                             cfg.quad_points, u0)),
      modes_(make_index_set(cfg.d, cfg.K)),
      state_(make_identity_state(grid_, cfg.track_maps)) {
  if (cfg.tau <= 0.0) throw std::invalid_argument("JkoSolver: tau must be positive");
  if (cfg.tol <= 0.0) throw std::invalid_argument("JkoSolver: tol must be positive");
  if (u0.d != cfg.d) throw std::invalid_argument("JkoSolver: density dimension mismatch");
  if (pot.d != cfg.d) throw std::invalid_argument("JkoSolver: potential dimension mismatch");
  if (1.0 + cfg.tau * pot_.modulus <= 0.0)
    std::cerr << "warning: tau too large for the potential's convexity modulus ("
              << pot_.modulus << "); the step objective may be nonconvex\n";
  state_.entropy_history.push_back(discrete_entropy(state_, model_, pot_));
}

void JkoSolver::ensure_tables() {
  if (tables_step_ == state_.n) return;
  tables_ = build_tables(modes_, state_.pos.data(), state_.size(), cfg_.track_maps,
                         cfg_.threads);
  tables_step_ = state_.n;
}

void JkoSolver::apply_increment(const Eigen::VectorXd& z) {
  ensure_tables();
  advance_state(state_, tables_, z, model_, pot_);
}

NewtonReport JkoSolver::step(double* el_res) {
  ensure_tables();
  StepFunctional F(state_, tables_, model_, pot_, cfg_.tau);
  NewtonOptions nopt;
  nopt.tol = cfg_.tol;
  nopt.max_iter = cfg_.max_newton;
  nopt.backtrack_factor = cfg_.backtrack_factor;
  nopt.max_backtracks = cfg_.max_backtracks;
  Eigen::VectorXd z;
  NewtonReport rep = newton_solve(F, z, nopt);
  if (el_res != nullptr) *el_res = el_residual(z);
  advance_state(state_, tables_, z, model_, pot_);
  zlast_ = z;
  return rep;
}

std::vector<NewtonReport> JkoSolver::run(std::vector<double>* el_residuals) {
  const int n = step_count(cfg_.T, cfg_.tau);
  std::vector<NewtonReport> reports;
  reports.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double r = 0.0;
    NewtonReport rep = step(el_residuals != nullptr ? &r : nullptr);
    if (el_residuals != nullptr) el_residuals->push_back(r);
    reports.push_back(rep);
    if (!rep.converged)
      throw std::runtime_error("JkoSolver::run: Newton failed at step " +
                               std::to_string(i + 1) + " (grad norm " +
                               std::to_string(rep.grad_norm) + ")");
  }
  return reports;
}

Eigen::MatrixXd JkoSolver::velocity_field(const Eigen::VectorXd& z) {
  if (!cfg_.track_maps)
    throw std::logic_error("velocity_field requires track_maps");
  if (!u0_.grad)
    throw std::invalid_argument("velocity_field requires the density gradient");
  ensure_tables();
  const int d = cfg_.d;
  const auto N = static_cast<Eigen::Index>(state_.size());

  // Mode sums at every node, one matrix-vector product per table component.
  const Eigen::VectorXd D0 = tables_.G[0] * z;
  Eigen::VectorXd D1;
  std::array<Eigen::VectorXd, 3> a;
  std::array<Eigen::VectorXd, 4> t3;
  for (int c = 0; c < tables_.hcomp(); ++c) a[c] = tables_.H[c] * z;
  for (int c = 0; c < tables_.tcomp(); ++c) t3[c] = tables_.T3[c] * z;
  if (d == 2) D1 = tables_.G[1] * z;

  Eigen::MatrixXd v(N, d);
  double xt[2], gv[2], gub[2];
  for (Eigen::Index k = 0; k < N; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const double ub = grid_.ubar[uk];
    u0_.grad(grid_.x(uk), gub);
    if (d == 1) {
      const double A = 1.0 + a[0][k];
      const double J = state_.jac[uk];
      const double T2 = state_.hmap[uk];
      const double B = A * J;
      if (B <= 0.0) throw std::domain_error("velocity_field: degenerate map");
      const double B2 = t3[0][k] * J * J + A * T2;
      const double ratio = ub / B;
      const double dp = model_.dP(ratio) * (gub[0] * B - ub * B2) / (B * B);
      xt[0] = state_.pos[uk] + D0[k];
      pot_.grad(xt, gv);
      v(k, 0) = -dp / ub - gv[0];
      continue;
    }

    const double A11 = 1.0 + a[0][k], A12 = a[1][k], A22 = 1.0 + a[2][k];
    const double Am[2][2] = {{A11, A12}, {A12, A22}};
    const double J[2][2] = {{state_.jac[uk * 4 + 0], state_.jac[uk * 4 + 1]},
                            {state_.jac[uk * 4 + 2], state_.jac[uk * 4 + 3]}};
    // Packed second derivatives of the increment components at the current
    // positions: D2t[i][c][e] from the third-derivative mode sums.
    const double D2t[2][2][2] = {
        {{t3[0][k], t3[1][k]}, {t3[1][k], t3[2][k]}},
        {{t3[1][k], t3[2][k]}, {t3[2][k], t3[3][k]}}};
    double T2[2][2][2];
    for (int i = 0; i < 2; ++i) {
      T2[i][0][0] = state_.hmap[uk * 6 + static_cast<std::size_t>(i) * 3 + 0];
      T2[i][0][1] = T2[i][1][0] =
          state_.hmap[uk * 6 + static_cast<std::size_t>(i) * 3 + 1];
      T2[i][1][1] = state_.hmap[uk * 6 + static_cast<std::size_t>(i) * 3 + 2];
    }

    double B[2][2];
    for (int i = 0; i < 2; ++i)
      for (int b = 0; b < 2; ++b)
        B[i][b] = Am[i][0] * J[0][b] + Am[i][1] * J[1][b];
    const double detB = B[0][0] * B[1][1] - B[0][1] * B[1][0];
    if (detB <= 0.0) throw std::domain_error("velocity_field: degenerate map");

    double B2[2][2][2];
    for (int i = 0; i < 2; ++i)
      for (int aa = 0; aa < 2; ++aa)
        for (int bb = 0; bb < 2; ++bb) {
          double s = 0.0;
          for (int c = 0; c < 2; ++c) {
            for (int e = 0; e < 2; ++e) s += D2t[i][c][e] * J[c][aa] * J[e][bb];
            s += Am[i][c] * T2[c][aa][bb];
          }
          B2[i][aa][bb] = s;
        }

    // cof[i][a] = d(det B)/dB[i][a].
    const double cof[2][2] = {{B[1][1], -B[1][0]}, {-B[0][1], B[0][0]}};
    double ddet[2], dcof_trace[2];
    for (int aa = 0; aa < 2; ++aa) {
      ddet[aa] = cof[0][0] * B2[0][0][aa] + cof[0][1] * B2[0][1][aa] +
                 cof[1][0] * B2[1][0][aa] + cof[1][1] * B2[1][1][aa];
    }
    // sum_a d(cof[i][a])/dx_a, using d(cof)/dx from the entries of B2.
    dcof_trace[0] = B2[1][1][0] - B2[1][0][1];
    dcof_trace[1] = -B2[0][1][0] + B2[0][0][1];

    const double ratio = ub / detB;
    const double p = model_.P(ratio);
    const double dPr = model_.dP(ratio);
    double dp[2];
    for (int aa = 0; aa < 2; ++aa)
      dp[aa] = dPr * (gub[aa] * detB - ub * ddet[aa]) / (detB * detB);

    xt[0] = state_.pos[uk * 2 + 0] + D0[k];
    xt[1] = state_.pos[uk * 2 + 1] + D1[k];
    pot_.grad(xt, gv);
    for (int i = 0; i < 2; ++i) {
      const double divM = dp[0] * cof[i][0] + dp[1] * cof[i][1] + p * dcof_trace[i];
      v(k, i) = -divM / ub - gv[i];
    }
  }
  return v;
}

double JkoSolver::el_residual(const Eigen::VectorXd& z) {
  const Eigen::MatrixXd v = velocity_field(z);
  const auto N = static_cast<Eigen::Index>(state_.size());
  Eigen::VectorXd w(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    w[k] = grid_.ubar[uk] * grid_.weight[uk];
  }
  Eigen::VectorXd r =
      tables_.G[0].transpose() *
      (w.array() * ((tables_.G[0] * z).array() / cfg_.tau - v.col(0).array()))
          .matrix();
  if (cfg_.d == 2)
    r += tables_.G[1].transpose() *
         (w.array() * ((tables_.G[1] * z).array() / cfg_.tau - v.col(1).array()))
             .matrix();
  return r.lpNorm<Eigen::Infinity>();
}

}  // namespace jko
