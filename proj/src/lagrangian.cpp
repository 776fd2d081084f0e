#include "jko/lagrangian.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace jko {

LagrangianState make_identity_state(const QuadratureGrid& grid, bool track_maps) {
  LagrangianState s;
  s.grid = &grid;
  s.pos = grid.node;
  s.sigma.assign(grid.size(), 1.0);
  s.track_maps = track_maps;
  if (track_maps) {
    const int d = grid.d;
    s.jac.assign(grid.size() * d * d, 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k)
      for (int a = 0; a < d; ++a) s.jac[k * d * d + a * d + a] = 1.0;
    s.hmap.assign(grid.size() * d * s.hcomp(), 0.0);
  }
  return s;
}

void transport_eval(const LagrangianState& s, const BasisTables& t,
                    const Eigen::VectorXd& z, std::size_t node, double* out) {
  const int d = s.d();
  for (int a = 0; a < d; ++a)
    out[a] = s.pos[node * d + a] + t.G[a].row(node).dot(z);
}

double jacobian_det(const BasisTables& t, const Eigen::VectorXd& z, std::size_t node) {
  if (t.d == 1) return 1.0 + t.H[0].row(node).dot(z);
  const double a0 = t.H[0].row(node).dot(z);
  const double a1 = t.H[1].row(node).dot(z);
  const double a2 = t.H[2].row(node).dot(z);
  return (1.0 + a0) * (1.0 + a2) - a1 * a1;
}

bool increment_feasible(const BasisTables& t, const Eigen::VectorXd& z) {
  if (t.d == 1) {
    const Eigen::VectorXd a0 = t.H[0] * z;
    return (a0.array() > -1.0).all();
  }
  const Eigen::VectorXd a0 = t.H[0] * z;
  const Eigen::VectorXd a1 = t.H[1] * z;
  const Eigen::VectorXd a2 = t.H[2] * z;
  const Eigen::ArrayXd det =
      (1.0 + a0.array()) * (1.0 + a2.array()) - a1.array() * a1.array();
  return (det > 0.0).all();
}

void advance_state(LagrangianState& s, const BasisTables& t, const Eigen::VectorXd& z,
                   const PressureModel& model, const Potential& pot) {
  const int d = s.d();
  const std::size_t n = s.size();
  std::array<Eigen::VectorXd, 3> A;
  for (int c = 0; c < s.hcomp(); ++c) A[c] = t.H[c] * z;
  Eigen::VectorXd det(n);
  if (d == 1)
    det = 1.0 + A[0].array();
  else
    det = ((1.0 + A[0].array()) * (1.0 + A[2].array()) - A[1].array() * A[1].array()).matrix();
  if (!(det.array() > 0.0).all())
    throw std::invalid_argument("advance_state: increment infeasible (det <= 0 at a node)");

  std::array<Eigen::VectorXd, 2> disp;
  for (int a = 0; a < d; ++a) disp[a] = t.G[a] * z;

  if (s.track_maps) {
    if (!t.has_third)
      throw std::invalid_argument("advance_state: tracked state needs third-derivative tables");
    std::array<Eigen::VectorXd, 4> T3;
    for (int c = 0; c < t.tcomp(); ++c) T3[c] = t.T3[c] * z;
    if (d == 1) {
      for (std::size_t k = 0; k < n; ++k) {
        const double Ak = 1.0 + A[0][k];
        const double J = s.jac[k];
        s.hmap[k] = T3[0][k] * J * J + Ak * s.hmap[k];
        s.jac[k] = Ak * J;
      }
    } else {
      for (std::size_t k = 0; k < n; ++k) {
        const double Am[2][2] = {{1.0 + A[0][k], A[1][k]}, {A[1][k], 1.0 + A[2][k]}};
        double* Jp = s.jac.data() + k * 4;
        const double J[2][2] = {{Jp[0], Jp[1]}, {Jp[2], Jp[3]}};
        // Second derivatives of the increment at this node; D2t[i][c][d].
        const double D2t[2][2][2] = {{{T3[0][k], T3[1][k]}, {T3[1][k], T3[2][k]}},
                                     {{T3[1][k], T3[2][k]}, {T3[2][k], T3[3][k]}}};
        double* Hm = s.hmap.data() + k * 6;  // [i*3 + {11,12,22}]
        double Hfull[2][2][2];
        for (int i = 0; i < 2; ++i) {
          Hfull[i][0][0] = Hm[i * 3 + 0];
          Hfull[i][0][1] = Hfull[i][1][0] = Hm[i * 3 + 1];
          Hfull[i][1][1] = Hm[i * 3 + 2];
        }
        double Hnew[2][3];
        for (int i = 0; i < 2; ++i)
          for (int ab = 0; ab < 3; ++ab) {
            const int a = ab == 2 ? 1 : 0;
            const int b = ab == 0 ? 0 : 1;
            double v = 0.0;
            for (int c = 0; c < 2; ++c)
              for (int e = 0; e < 2; ++e) v += D2t[i][c][e] * J[c][a] * J[e][b];
            for (int c = 0; c < 2; ++c) v += Am[i][c] * Hfull[c][a][b];
            Hnew[i][ab] = v;
          }
        double Jnew[2][2];
        for (int i = 0; i < 2; ++i)
          for (int a = 0; a < 2; ++a)
            Jnew[i][a] = Am[i][0] * J[0][a] + Am[i][1] * J[1][a];
        for (int i = 0; i < 2; ++i)
          for (int ab = 0; ab < 3; ++ab) Hm[i * 3 + ab] = Hnew[i][ab];
        Jp[0] = Jnew[0][0];
        Jp[1] = Jnew[0][1];
        Jp[2] = Jnew[1][0];
        Jp[3] = Jnew[1][1];
      }
    }
  }

  for (std::size_t k = 0; k < n; ++k) {
    for (int a = 0; a < d; ++a) s.pos[k * d + a] += disp[a][k];
    s.sigma[k] *= det[k];
  }
  ++s.n;
  s.entropy_history.push_back(discrete_entropy(s, model, pot));
}

std::vector<double> density_at_nodes(const LagrangianState& s) {
  std::vector<double> u(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) u[k] = s.grid->ubar[k] / s.sigma[k];
  return u;
}

double discrete_entropy(const LagrangianState& s, const PressureModel& model,
                        const Potential& pot) {
  const int d = s.d();
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double ub = s.grid->ubar[k];
    acc += (model.hs(s.sigma[k] / ub) + pot.value(s.pos.data() + k * d)) * ub *
           s.grid->weight[k];
  }
  return acc;
}

double map_distance(const LagrangianState& a, const LagrangianState& b) {
  const QuadratureGrid *ga = a.grid, *gb = b.grid;
  if (ga->d != gb->d || ga->size() != gb->size() || ga->K1 != gb->K1 || ga->K2 != gb->K2)
    throw std::invalid_argument("map_distance: states live on different grids");
  if (a.n != b.n)
    throw std::invalid_argument("map_distance: states are at different steps");
  const int d = ga->d;
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double q = 0.0;
    for (int c = 0; c < d; ++c) {
      const double dx = a.pos[k * d + c] - b.pos[k * d + c];
      q += dx * dx;
    }
    acc += q * ga->ubar[k] * ga->weight[k];
  }
  return std::sqrt(acc);
}

void write_state_csv(const LagrangianState& s, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("write_state_csv: cannot open " + path);
  const int d = s.d();
  if (d == 1)
    std::fprintf(f, "id x0 x sigma u\n");
  else
    std::fprintf(f, "id x0 y0 x y sigma u\n");
  for (std::size_t k = 0; k < s.size(); ++k) {
    std::fprintf(f, "%zu", k);
    for (int a = 0; a < d; ++a) std::fprintf(f, " %.16e", s.grid->node[k * d + a]);
    for (int a = 0; a < d; ++a) std::fprintf(f, " %.16e", s.pos[k * d + a]);
    std::fprintf(f, " %.16e %.16e\n", s.sigma[k], s.grid->ubar[k] / s.sigma[k]);
  }
  std::fclose(f);
}

}  // namespace jko
