#include "jko/fem.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace jko {

namespace {
// 2x2 Gauss points on the unit reference cell.
const double kGp[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
}  // namespace

FemSolver::FemSolver(const FemConfig& cfg, const PressureModel& model,
                     const Potential& pot, const ScalarField& u0)
    : cfg_(cfg), model_(model), pot_(pot) {
  if (cfg.L < 3) throw std::invalid_argument("FemSolver: L must be at least 3");
  if (cfg.tau <= 0.0) throw std::invalid_argument("FemSolver: tau must be positive");
  if (pot.d != 2 || u0.d != 2)
    throw std::invalid_argument("FemSolver: two-dimensional data required");
  const int L = cfg_.L;
  h_ = 1.0 / static_cast<double>(L - 1);

  u_.resize(L * L);
  lattice_w_.resize(L * L);
  for (int iy = 0; iy < L; ++iy)
    for (int ix = 0; ix < L; ++ix) {
      const double x[2] = {ix * h_, iy * h_};
      u_[iy * L + ix] = u0.f(x);
      const double fx = (ix == 0 || ix == L - 1) ? 0.5 : 1.0;
      const double fy = (iy == 0 || iy == L - 1) ? 0.5 : 1.0;
      lattice_w_[iy * L + ix] = h_ * h_ * fx * fy;
    }
  assemble_constant();
}

void FemSolver::set_values(const Eigen::VectorXd& u) {
  if (u.size() != u_.size())
    throw std::invalid_argument("FemSolver::set_values: size mismatch");
  u_ = u;
}

void FemSolver::assemble_constant() {
  const int L = cfg_.L;
  const int nc = L - 1;
  const double wq = 0.25 * h_ * h_;

  std::vector<Eigen::Triplet<double>> tm, tc;
  tm.reserve(static_cast<std::size_t>(nc) * nc * 16 * 4);
  if (pot_.kind != PotKind::Zero)
    tc.reserve(static_cast<std::size_t>(nc) * nc * 16 * 4);
  qp_gradV_.assign(static_cast<std::size_t>(nc) * nc * 8, 0.0);

  for (int cy = 0; cy < nc; ++cy)
    for (int cx = 0; cx < nc; ++cx) {
      const int n[4] = {cy * L + cx, cy * L + cx + 1, (cy + 1) * L + cx,
                        (cy + 1) * L + cx + 1};
      for (int qy = 0; qy < 2; ++qy)
        for (int qx = 0; qx < 2; ++qx) {
          const double xi = kGp[qx], eta = kGp[qy];
          const double N[4] = {(1 - xi) * (1 - eta), xi * (1 - eta), (1 - xi) * eta,
                               xi * eta};
          const double gx[4] = {-(1 - eta) / h_, (1 - eta) / h_, -eta / h_, eta / h_};
          const double gy[4] = {-(1 - xi) / h_, -xi / h_, (1 - xi) / h_, xi / h_};
          double gv[2] = {0.0, 0.0};
          if (pot_.kind != PotKind::Zero) {
            const double xq[2] = {(cx + xi) * h_, (cy + eta) * h_};
            pot_.grad(xq, gv);
          }
          const std::size_t qoff =
              (static_cast<std::size_t>(cy * nc + cx) * 4 +
               static_cast<std::size_t>(qy * 2 + qx)) *
              2;
          qp_gradV_[qoff + 0] = gv[0];
          qp_gradV_[qoff + 1] = gv[1];
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
              tm.emplace_back(n[a], n[b], wq * N[a] * N[b]);
              if (pot_.kind != PotKind::Zero)
                tc.emplace_back(n[a], n[b],
                                wq * (gv[0] * gx[a] + gv[1] * gy[a]) * N[b]);
            }
        }
    }
  mass_mat_.resize(L * L, L * L);
  mass_mat_.setFromTriplets(tm.begin(), tm.end());
  if (pot_.kind != PotKind::Zero) {
    adv_mat_.resize(L * L, L * L);
    adv_mat_.setFromTriplets(tc.begin(), tc.end());
  }
}

void FemSolver::residual(const Eigen::VectorXd& u, const Eigen::VectorXd& uold,
                         Eigen::VectorXd& R, Eigen::SparseMatrix<double>* Kdiff) const {
  const int L = cfg_.L;
  const int nc = L - 1;
  const double wq = 0.25 * h_ * h_;

  R = mass_mat_ * ((u - uold) / cfg_.tau);
  if (pot_.kind != PotKind::Zero) R += adv_mat_ * u;

  std::vector<Eigen::Triplet<double>> tk;
  if (Kdiff != nullptr) tk.reserve(static_cast<std::size_t>(nc) * nc * 16 * 4);

  for (int cy = 0; cy < nc; ++cy)
    for (int cx = 0; cx < nc; ++cx) {
      const int n[4] = {cy * L + cx, cy * L + cx + 1, (cy + 1) * L + cx,
                        (cy + 1) * L + cx + 1};
      const double uc[4] = {u[n[0]], u[n[1]], u[n[2]], u[n[3]]};
      for (int qy = 0; qy < 2; ++qy)
        for (int qx = 0; qx < 2; ++qx) {
          const double xi = kGp[qx], eta = kGp[qy];
          const double N[4] = {(1 - xi) * (1 - eta), xi * (1 - eta), (1 - xi) * eta,
                               xi * eta};
          const double gx[4] = {-(1 - eta) / h_, (1 - eta) / h_, -eta / h_, eta / h_};
          const double gy[4] = {-(1 - xi) / h_, -xi / h_, (1 - xi) / h_, xi / h_};
          double uq = 0.0, ux = 0.0, uy = 0.0;
          for (int a = 0; a < 4; ++a) {
            uq += uc[a] * N[a];
            ux += uc[a] * gx[a];
            uy += uc[a] * gy[a];
          }
          const double dp = model_.dP(uq);
          for (int a = 0; a < 4; ++a)
            R[n[a]] += wq * dp * (ux * gx[a] + uy * gy[a]);
          if (Kdiff != nullptr) {
            const double d2p = model_.d2P(uq);
            for (int a = 0; a < 4; ++a)
              for (int b = 0; b < 4; ++b)
                tk.emplace_back(n[a], n[b],
                                wq * ((d2p * N[b] * ux + dp * gx[b]) * gx[a] +
                                      (d2p * N[b] * uy + dp * gy[b]) * gy[a]));
          }
        }
    }
  if (Kdiff != nullptr) {
    Kdiff->resize(L * L, L * L);
    Kdiff->setFromTriplets(tk.begin(), tk.end());
  }
}

void FemSolver::step() {
  const Eigen::VectorXd uold = u_;
  Eigen::VectorXd u = uold;
  Eigen::VectorXd R, Rt, du;
  Eigen::SparseMatrix<double> Kd, J;

  for (int it = 0; it <= cfg_.max_newton; ++it) {
    residual(u, uold, R, &Kd);
    const double rn = R.norm();
    if (rn <= cfg_.newton_tol) {
      u_ = u;
      ++nsteps_;
      return;
    }
    if (it == cfg_.max_newton) break;

    J = mass_mat_ / cfg_.tau + Kd;
    if (pot_.kind != PotKind::Zero) J += adv_mat_;
    J.makeCompressed();
    if (!pattern_ready_) {
      lu_.analyzePattern(J);
      pattern_ready_ = true;
    }
    lu_.factorize(J);
    if (lu_.info() != Eigen::Success)
      throw std::runtime_error("FemSolver::step: sparse factorization failed");
    du = lu_.solve(-R);

    double alpha = 1.0;
    bool accepted = false;
    for (int hv = 0; hv <= cfg_.max_halvings; ++hv) {
      const Eigen::VectorXd ut = u + alpha * du;
      residual(ut, uold, Rt, nullptr);
      if (Rt.norm() < rn) {
        u = ut;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted)
      throw std::runtime_error("FemSolver::step: line search stalled");
  }
  throw std::runtime_error("FemSolver::step: Newton did not converge");
}

void FemSolver::advance_to(double T) {
  const int n = static_cast<int>(std::ceil((T - time()) / cfg_.tau - 1e-9));
  for (int i = 0; i < n; ++i) step();
}

double FemSolver::mass() const { return lattice_w_.dot(u_); }

double FemSolver::entropy() const {
  const int L = cfg_.L;
  double E = 0.0;
  for (int iy = 0; iy < L; ++iy)
    for (int ix = 0; ix < L; ++ix) {
      const int k = iy * L + ix;
      const double x[2] = {ix * h_, iy * h_};
      E += lattice_w_[k] * (model_.h(u_[k]) + u_[k] * pot_.value(x));
    }
  return E;
}

double FemSolver::interpolate(const double* x) const {
  const int L = cfg_.L;
  double cx = x[0], cy = x[1];
  cx = cx < 0.0 ? 0.0 : (cx > 1.0 ? 1.0 : cx);
  cy = cy < 0.0 ? 0.0 : (cy > 1.0 ? 1.0 : cy);
  int ix = static_cast<int>(cx / h_);
  int iy = static_cast<int>(cy / h_);
  if (ix > L - 2) ix = L - 2;
  if (iy > L - 2) iy = L - 2;
  const double xi = cx / h_ - ix;
  const double eta = cy / h_ - iy;
  const double u00 = u_[iy * L + ix], u10 = u_[iy * L + ix + 1];
  const double u01 = u_[(iy + 1) * L + ix], u11 = u_[(iy + 1) * L + ix + 1];
  return (1 - xi) * (1 - eta) * u00 + xi * (1 - eta) * u10 + (1 - xi) * eta * u01 +
         xi * eta * u11;
}

void FemSolver::write_snapshot_csv(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr)
    throw std::runtime_error("FemSolver: cannot open " + path + " for writing");
  std::fprintf(f, "i,j,x,y,u\n");
  const int L = cfg_.L;
  for (int iy = 0; iy < L; ++iy)
    for (int ix = 0; ix < L; ++ix)
      std::fprintf(f, "%d,%d,%.16e,%.16e,%.16e\n", ix, iy, ix * h_, iy * h_,
                   u_[iy * L + ix]);
  std::fclose(f);
}

}  // namespace jko
