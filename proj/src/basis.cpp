#include "jko/basis.hpp"

#include <cmath>
#include <stdexcept>

#include "jko/parallel.hpp"

namespace jko {

namespace {
constexpr int kMaxCutoff = 64;

double norm_const(const ModeIndex& k) {
  int nz = 0;
  double n2 = 0.0;
  for (int a = 0; a < k.d; ++a) {
    if (k.k[a] != 0) ++nz;
    n2 += double(k.k[a]) * k.k[a];
  }
  return std::pow(std::sqrt(2.0), nz) / (M_PI * std::sqrt(n2));
}
}  // namespace

IndexSet make_index_set(int d, int K) {
  if (d != 1 && d != 2) throw std::invalid_argument("make_index_set: d must be 1 or 2");
  if (K < 1 || K > kMaxCutoff) throw std::invalid_argument("make_index_set: K out of range");
  IndexSet I;
  I.d = d;
  I.K = K;
  if (d == 1) {
    for (int k = 1; k <= K; ++k) I.modes.push_back({1, {k, 0}});
  } else {
    for (int k1 = 0; k1 <= K; ++k1)
      for (int k2 = 0; k2 <= K; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        I.modes.push_back({2, {k1, k2}});
      }
  }
  return I;
}

double basis_value(const ModeIndex& k, const double* x) {
  double v = norm_const(k);
  for (int a = 0; a < k.d; ++a) v *= std::cos(k.k[a] * M_PI * x[a]);
  return v;
}

void basis_gradient(const ModeIndex& k, const double* x, double* g) {
  const double c = norm_const(k);
  if (k.d == 1) {
    const double p = k.k[0] * M_PI;
    g[0] = -c * p * std::sin(p * x[0]);
    return;
  }
  const double p1 = k.k[0] * M_PI, p2 = k.k[1] * M_PI;
  const double c1 = std::cos(p1 * x[0]), s1 = std::sin(p1 * x[0]);
  const double c2 = std::cos(p2 * x[1]), s2 = std::sin(p2 * x[1]);
  g[0] = -c * p1 * s1 * c2;
  g[1] = -c * p2 * c1 * s2;
}

void basis_hessian(const ModeIndex& k, const double* x, double* H) {
  const double c = norm_const(k);
  if (k.d == 1) {
    const double p = k.k[0] * M_PI;
    H[0] = -c * p * p * std::cos(p * x[0]);
    return;
  }
  const double p1 = k.k[0] * M_PI, p2 = k.k[1] * M_PI;
  const double c1 = std::cos(p1 * x[0]), s1 = std::sin(p1 * x[0]);
  const double c2 = std::cos(p2 * x[1]), s2 = std::sin(p2 * x[1]);
  H[0] = -c * p1 * p1 * c1 * c2;
  H[1] = c * p1 * p2 * s1 * s2;
  H[2] = -c * p2 * p2 * c1 * c2;
}

void basis_third(const ModeIndex& k, const double* x, double* T) {
  const double c = norm_const(k);
  if (k.d == 1) {
    const double p = k.k[0] * M_PI;
    T[0] = c * p * p * p * std::sin(p * x[0]);
    return;
  }
  const double p1 = k.k[0] * M_PI, p2 = k.k[1] * M_PI;
  const double c1 = std::cos(p1 * x[0]), s1 = std::sin(p1 * x[0]);
  const double c2 = std::cos(p2 * x[1]), s2 = std::sin(p2 * x[1]);
  T[0] = c * p1 * p1 * p1 * s1 * c2;
  T[1] = c * p1 * p1 * p2 * c1 * s2;
  T[2] = c * p1 * p2 * p2 * s1 * c2;
  T[3] = c * p2 * p2 * p2 * c1 * s2;
}

BasisTables build_tables(const IndexSet& I, const double* points, std::size_t n,
                         bool with_third, int threads) {
  BasisTables t;
  t.d = I.d;
  t.n = n;
  t.M = I.size();
  t.has_third = with_third;
  for (int a = 0; a < I.d; ++a) t.G[a].resize(n, t.M);
  for (int s = 0; s < t.hcomp(); ++s) t.H[s].resize(n, t.M);
  if (with_third)
    for (int s = 0; s < t.tcomp(); ++s) t.T3[s].resize(n, t.M);

  const int K = I.K;
  parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
    // Per-axis cos/sin caches for frequencies 0..K at one point.
    double cs[2][kMaxCutoff + 1], sn[2][kMaxCutoff + 1];
    for (std::size_t i = b; i < e; ++i) {
      const double* x = points + i * I.d;
      for (int a = 0; a < I.d; ++a)
        for (int k = 0; k <= K; ++k) {
          cs[a][k] = std::cos(k * M_PI * x[a]);
          sn[a][k] = std::sin(k * M_PI * x[a]);
        }
      for (std::size_t j = 0; j < t.M; ++j) {
        const ModeIndex& mk = I.modes[j];
        const double c = norm_const(mk);
        if (I.d == 1) {
          const int k1 = mk.k[0];
          const double p = k1 * M_PI;
          t.G[0](i, j) = -c * p * sn[0][k1];
          t.H[0](i, j) = -c * p * p * cs[0][k1];
          if (with_third) t.T3[0](i, j) = c * p * p * p * sn[0][k1];
        } else {
          const int k1 = mk.k[0], k2 = mk.k[1];
          const double p1 = k1 * M_PI, p2 = k2 * M_PI;
          const double c1 = cs[0][k1], s1 = sn[0][k1];
          const double c2 = cs[1][k2], s2 = sn[1][k2];
          t.G[0](i, j) = -c * p1 * s1 * c2;
          t.G[1](i, j) = -c * p2 * c1 * s2;
          t.H[0](i, j) = -c * p1 * p1 * c1 * c2;
          t.H[1](i, j) = c * p1 * p2 * s1 * s2;
          t.H[2](i, j) = -c * p2 * p2 * c1 * c2;
          if (with_third) {
            t.T3[0](i, j) = c * p1 * p1 * p1 * s1 * c2;
            t.T3[1](i, j) = c * p1 * p1 * p2 * c1 * s2;
            t.T3[2](i, j) = c * p1 * p2 * p2 * s1 * c2;
            t.T3[3](i, j) = c * p2 * p2 * p2 * c1 * s2;
          }
        }
      }
    }
  });
  return t;
}

Eigen::MatrixXd gram_of_gradients(const IndexSet& I, const QuadratureGrid& fine) {
  const BasisTables t = build_tables(I, fine.node.data(), fine.size());
  const Eigen::Map<const Eigen::VectorXd> w(fine.weight.data(), fine.size());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(I.size(), I.size());
  for (int a = 0; a < I.d; ++a) G += t.G[a].transpose() * w.asDiagonal() * t.G[a];
  return G;
}

Eigen::VectorXd project(const std::function<void(const double*, double*)>& v,
                        const IndexSet& I, const QuadratureGrid& fine) {
  const BasisTables t = build_tables(I, fine.node.data(), fine.size());
  const std::size_t n = fine.size();
  std::array<Eigen::VectorXd, 2> vw;
  for (int a = 0; a < I.d; ++a) vw[a].resize(n);
  double val[2];
  for (std::size_t k = 0; k < n; ++k) {
    v(fine.x(k), val);
    for (int a = 0; a < I.d; ++a) vw[a][k] = val[a] * fine.weight[k];
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(I.size());
  for (int a = 0; a < I.d; ++a) z += t.G[a].transpose() * vw[a];
  return z;
}

}  // namespace jko
