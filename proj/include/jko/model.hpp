#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace jko {

/// Pressure/entropy function family P(u)=u^m with its entropy density h and
/// the Jacobian-side function h_*(s) = s h(1/s). The three are linked by
/// P'(r) = r h''(r) and h_*'(s) = -P(1/s).
struct PressureModel {
  double m = 2.0;

  double P(double r) const;
  double dP(double r) const;
  double d2P(double r) const;
  double h(double r) const;
  double dh(double r) const;
  double hs(double s) const;    // h_*(s); s <= 0 is a domain error
  double dhs(double s) const;
  double d2hs(double s) const;

  // Generic h_* for dual-number scalars. The caller guarantees s > 0; the
  // feasibility check happens on plain doubles before any dual evaluation.
  template <class T>
  T hs_t(const T& s) const {
    using std::log;
    using std::pow;
    if (m == 1.0) return -log(s);
    return pow(s, 1.0 - m) / (m - 1.0);
  }
};

// h(r) = r^m/(m-1) for m != 1, r log r for m = 1. The affine normalization is
// fixed so that h_*(s) = 1/s at m = 2.
PressureModel make_power_pressure(double m);

enum class PotKind { Zero, Quadratic, Exp1 };

/// External potential with closed-form derivatives and a convexity modulus
/// lambda such that hess V >= lambda * identity on the cube.
struct Potential {
  PotKind kind = PotKind::Zero;
  int d = 2;
  double strength = 0.0;  // lambda of the quadratic well; 0.75 for exp1
  double modulus = 0.0;

  double value(const double* x) const;
  void grad(const double* x, double* g) const;
  // Packed symmetric Hessian: d=1 -> [11]; d=2 -> [11,12,22].
  void hess(const double* x, double* H) const;

  template <class T>
  T value_t(const T* x) const {
    using std::cos;
    switch (kind) {
      case PotKind::Zero:
        return T(0.0);
      case PotKind::Quadratic: {
        T s = x[0] * x[0];
        for (int a = 1; a < d; ++a) s = s + x[a] * x[a];
        return 0.5 * strength * s;
      }
      case PotKind::Exp1: {
        const double pi = M_PI;
        return -strength * (cos(2.0 * pi * x[0]) - 1.0) *
               (cos(4.0 * pi * x[1]) - 1.0);
      }
    }
    return T(0.0);
  }
};

Potential make_potential_zero(int d);
// V(x) = (lambda/2)|x|^2, minimum at the origin; modulus = lambda exactly.
Potential make_potential_quadratic(int d, double lambda);
// V(x) = -0.75 (cos(2 pi x1) - 1)(cos(4 pi x2) - 1); d = 2 only.
Potential make_potential_exp1();

/// Closed-form scalar field on the closed unit cube. The gradient evaluator is
/// optional; it is required only by the velocity diagnostics.
struct ScalarField {
  int d = 2;
  bool symmetric_periodic = false;
  std::function<double(const double*)> f;
  std::function<void(const double*, double*)> grad;
};

ScalarField make_uniform_density(int d);

// u0(x) = C (0.1 + x1 (cos(4 pi x1) - 1.2)(cos(2 pi x2) - 1)), with C fixed by
// unit mass under a fine reference quadrature. d = 2.
ScalarField make_initial_density_exp1();

// The normalization constant C above (analytically 10/7).
double exp1_normalization();

}  // namespace jko
