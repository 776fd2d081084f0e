#include "jko/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace jko {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence for P_n and its derivative at xi.
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x[i] = -xi;
    x[n - 1 - i] = xi;
    const double wi = 2.0 / ((1.0 - xi * xi) * dp * dp);
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

QuadratureGrid build_gauss_grid(int d, int K1, int K2, const ScalarField& ubar) {
  if (d != 1 && d != 2) throw std::invalid_argument("build_gauss_grid: d must be 1 or 2");
  if (K1 < 1 || K2 < 1) throw std::invalid_argument("build_gauss_grid: K1 and K2 must be >= 1");

  std::vector<double> gx, gw;
  gauss_legendre(K2, gx, gw);

  // One-dimensional composite rule on [0,1].
  const double h = 1.0 / K1;
  std::vector<double> x1(K1 * K2), w1(K1 * K2);
  for (int c = 0; c < K1; ++c)
    for (int q = 0; q < K2; ++q) {
      x1[c * K2 + q] = (c + 0.5 + 0.5 * gx[q]) * h;
      w1[c * K2 + q] = 0.5 * gw[q] * h;
    }

  QuadratureGrid g;
  g.d = d;
  g.K1 = K1;
  g.K2 = K2;
  const std::size_t n1 = x1.size();
  const std::size_t n = (d == 1) ? n1 : n1 * n1;
  g.node.resize(n * d);
  g.weight.resize(n);
  g.ubar.resize(n);
  if (d == 1) {
    for (std::size_t i = 0; i < n1; ++i) {
      g.node[i] = x1[i];
      g.weight[i] = w1[i];
    }
  } else {
    std::size_t k = 0;
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n1; ++j, ++k) {
        g.node[2 * k] = x1[i];
        g.node[2 * k + 1] = x1[j];
        g.weight[k] = w1[i] * w1[j];
      }
  }
  for (std::size_t k = 0; k < n; ++k) {
    g.ubar[k] = ubar.f(g.x(k));
    if (!(g.ubar[k] > 0.0))
      throw std::runtime_error("build_gauss_grid: reference density must be positive at all nodes");
  }
  return g;
}

double integrate(const QuadratureGrid& g, const std::vector<double>& values) {
  if (values.size() != g.size())
    throw std::invalid_argument("integrate: one value per node required");
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) s += values[k] * g.weight[k];
  return s;
}

}  // namespace jko
