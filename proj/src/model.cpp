#include "jko/model.hpp"

#include <cmath>

#include "jko/quadrature.hpp"

namespace jko {

double PressureModel::P(double r) const { return std::pow(r, m); }

double PressureModel::dP(double r) const { return m * std::pow(r, m - 1.0); }

double PressureModel::d2P(double r) const {
  return m * (m - 1.0) * std::pow(r, m - 2.0);
}

double PressureModel::h(double r) const {
  if (m == 1.0) return r * std::log(r);
  return std::pow(r, m) / (m - 1.0);
}

double PressureModel::dh(double r) const {
  if (m == 1.0) return std::log(r) + 1.0;
  return m * std::pow(r, m - 1.0) / (m - 1.0);
}

double PressureModel::hs(double s) const {
  if (s <= 0.0) throw std::domain_error("hs: argument must be positive");
  return hs_t(s);
}

double PressureModel::dhs(double s) const {
  if (s <= 0.0) throw std::domain_error("dhs: argument must be positive");
  if (m == 1.0) return -1.0 / s;
  return -std::pow(s, -m);
}

double PressureModel::d2hs(double s) const {
  if (s <= 0.0) throw std::domain_error("d2hs: argument must be positive");
  if (m == 1.0) return 1.0 / (s * s);
  return m * std::pow(s, -m - 1.0);
}

PressureModel make_power_pressure(double m) {
  if (m <= 0.0) throw std::invalid_argument("pressure exponent m must be positive");
  PressureModel pm;
  pm.m = m;
  return pm;
}

double Potential::value(const double* x) const { return value_t(x); }

void Potential::grad(const double* x, double* g) const {
  switch (kind) {
    case PotKind::Zero:
      for (int a = 0; a < d; ++a) g[a] = 0.0;
      return;
    case PotKind::Quadratic:
      for (int a = 0; a < d; ++a) g[a] = strength * x[a];
      return;
    case PotKind::Exp1: {
      const double pi = M_PI;
      const double c1 = std::cos(2.0 * pi * x[0]) - 1.0;
      const double c2 = std::cos(4.0 * pi * x[1]) - 1.0;
      g[0] = -strength * (-2.0 * pi * std::sin(2.0 * pi * x[0])) * c2;
      g[1] = -strength * c1 * (-4.0 * pi * std::sin(4.0 * pi * x[1]));
      return;
    }
  }
}

void Potential::hess(const double* x, double* H) const {
  switch (kind) {
    case PotKind::Zero:
      for (int s = 0; s < (d == 1 ? 1 : 3); ++s) H[s] = 0.0;
      return;
    case PotKind::Quadratic:
      if (d == 1) {
        H[0] = strength;
      } else {
        H[0] = strength;
        H[1] = 0.0;
        H[2] = strength;
      }
      return;
    case PotKind::Exp1: {
      const double pi = M_PI;
      const double c1 = std::cos(2.0 * pi * x[0]) - 1.0;
      const double c2 = std::cos(4.0 * pi * x[1]) - 1.0;
      const double s1 = std::sin(2.0 * pi * x[0]);
      const double s2 = std::sin(4.0 * pi * x[1]);
      H[0] = -strength * (-4.0 * pi * pi * std::cos(2.0 * pi * x[0])) * c2;
      H[1] = -strength * (-2.0 * pi * s1) * (-4.0 * pi * s2);
      H[2] = -strength * c1 * (-16.0 * pi * pi * std::cos(4.0 * pi * x[1]));
      return;
    }
  }
}

Potential make_potential_zero(int d) {
  Potential p;
  p.kind = PotKind::Zero;
  p.d = d;
  return p;
}

Potential make_potential_quadratic(int d, double lambda) {
  Potential p;
  p.kind = PotKind::Quadratic;
  p.d = d;
  p.strength = lambda;
  p.modulus = lambda;
  return p;
}

static double exp1_modulus() {
  // Smallest eigenvalue of the exp1 Hessian over a 256^2 lattice scan,
  // floored with a small safety margin. The potential is not convex.
  static const double cached = [] {
    Potential p;
    p.kind = PotKind::Exp1;
    p.d = 2;
    p.strength = 0.75;
    double lo = 0.0;
    const int n = 256;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const double x[2] = {double(i) / n, double(j) / n};
        double H[3];
        p.hess(x, H);
        const double tr = H[0] + H[2];
        const double disc = std::sqrt((H[0] - H[2]) * (H[0] - H[2]) + 4.0 * H[1] * H[1]);
        lo = std::min(lo, 0.5 * (tr - disc));
      }
    return lo - 1e-3;
  }();
  return cached;
}

Potential make_potential_exp1() {
  Potential p;
  p.kind = PotKind::Exp1;
  p.d = 2;
  p.strength = 0.75;
  p.modulus = exp1_modulus();
  return p;
}

ScalarField make_uniform_density(int d) {
  ScalarField s;
  s.d = d;
  s.symmetric_periodic = true;
  s.f = [](const double*) { return 1.0; };
  s.grad = [d](const double*, double* g) {
    for (int a = 0; a < d; ++a) g[a] = 0.0;
  };
  return s;
}

static double u0_exp1_raw(const double* x) {
  const double pi = M_PI;
  return 0.1 + x[0] * (std::cos(4.0 * pi * x[0]) - 1.2) * (std::cos(2.0 * pi * x[1]) - 1.0);
}

static void u0_exp1_raw_grad(const double* x, double* g) {
  const double pi = M_PI;
  const double a = std::cos(4.0 * pi * x[0]) - 1.2;
  const double b = std::cos(2.0 * pi * x[1]) - 1.0;
  g[0] = (a + x[0] * (-4.0 * pi * std::sin(4.0 * pi * x[0]))) * b;
  g[1] = x[0] * a * (-2.0 * pi * std::sin(2.0 * pi * x[1]));
}

double exp1_normalization() {
  static const double cached = [] {
    ScalarField raw;
    raw.d = 2;
    raw.f = [](const double* x) { return u0_exp1_raw(x); };
    // 64 cells and 3 Gauss points resolve the trigonometric factors well past
    // double precision.
    const QuadratureGrid g = build_gauss_grid(2, 64, 3, raw);
    double mass = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) mass += g.ubar[k] * g.weight[k];
    return 1.0 / mass;
  }();
  return cached;
}

ScalarField make_initial_density_exp1() {
  const double C = exp1_normalization();
  ScalarField s;
  s.d = 2;
  // The x1 factor breaks evenness of the 2-periodic extension at x1 = 0.
  s.symmetric_periodic = false;
  s.f = [C](const double* x) { return C * u0_exp1_raw(x); };
  s.grad = [C](const double* x, double* g) {
    u0_exp1_raw_grad(x, g);
    g[0] *= C;
    g[1] *= C;
  };
  return s;
}

}  // namespace jko
