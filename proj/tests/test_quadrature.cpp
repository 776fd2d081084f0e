#include <doctest.h>

#include <cmath>
#include <vector>

#include "jko/model.hpp"
#include "jko/quadrature.hpp"

using namespace jko;

TEST_CASE("gauss-legendre nodes and weights on [-1,1]") {
  std::vector<double> x, w;
  gauss_legendre(1, x, w);
  CHECK(x[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(w[0] == doctest::Approx(2.0));
  gauss_legendre(2, x, w);
  CHECK(x[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-14));
  gauss_legendre(3, x, w);
  CHECK(x[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("gauss rule integrates polynomials of degree 2n-1 exactly") {
  std::vector<double> x, w;
  for (int n : {2, 4, 7}) {
    gauss_legendre(n, x, w);
    for (int p = 0; p < 2 * n; ++p) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += w[i] * std::pow(x[i], p);
      const double exact = (p % 2 == 1) ? 0.0 : 2.0 / (p + 1);
      CHECK(acc == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("grid weights sum to the cube volume") {
  const ScalarField u = make_uniform_density(2);
  for (int K1 : {1, 4, 16})
    for (int K2 : {1, 2, 5}) {
      const QuadratureGrid g = build_gauss_grid(2, K1, K2, u);
      double s = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) s += g.weight[k];
      CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    }
  const ScalarField u1 = make_uniform_density(1);
  const QuadratureGrid g1 = build_gauss_grid(1, 8, 3, u1);
  double s = 0.0;
  for (std::size_t k = 0; k < g1.size(); ++k) s += g1.weight[k];
  CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("node count and strict interiority") {
  const ScalarField u = make_uniform_density(2);
  const QuadratureGrid g = build_gauss_grid(2, 6, 3, u);
  CHECK(g.size() == std::size_t(18 * 18));
  for (std::size_t k = 0; k < g.size(); ++k)
    for (int a = 0; a < 2; ++a) {
      CHECK(g.x(k)[a] > 0.0);
      CHECK(g.x(k)[a] < 1.0);
    }
  const ScalarField u1 = make_uniform_density(1);
  const QuadratureGrid g1 = build_gauss_grid(1, 5, 4, u1);
  CHECK(g1.size() == std::size_t(20));
}

TEST_CASE("ubar holds the density sampled at the nodes") {
  const ScalarField u0 = make_initial_density_exp1();
  const QuadratureGrid g = build_gauss_grid(2, 4, 2, u0);
  for (std::size_t k = 0; k < g.size(); k += 7)
    CHECK(g.ubar[k] == doctest::Approx(u0.f(g.x(k))).epsilon(1e-15));
}

TEST_CASE("composite rule nails smooth integrals") {
  // int_0^1 int_0^1 cos^2(2 pi x) cos^2(pi y) = 1/4
  ScalarField f;
  f.d = 2;
  f.f = [](const double* x) {
    const double a = std::cos(2 * M_PI * x[0]), b = std::cos(M_PI * x[1]);
    return a * a * b * b;
  };
  const QuadratureGrid g = build_gauss_grid(2, 8, 3, f);
  double acc = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) acc += g.ubar[k] * g.weight[k];
  CHECK(acc == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("integrate helper contracts values against weights") {
  const ScalarField u = make_uniform_density(2);
  const QuadratureGrid g = build_gauss_grid(2, 3, 2, u);
  std::vector<double> vals(g.size(), 2.5);
  CHECK(integrate(g, vals) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("coarse-to-fine grid refinement converges on a rough integrand") {
  ScalarField f;
  f.d = 1;
  f.f = [](const double* x) { return std::exp(std::cos(3 * M_PI * x[0])); };
  double prev_err = 1e300;
  const double ref = [&] {
    const QuadratureGrid g = build_gauss_grid(1, 64, 6, f);
    std::vector<double> v(g.ubar.begin(), g.ubar.end());
    return integrate(g, v);
  }();
  for (int K1 : {2, 4, 8, 16}) {
    const QuadratureGrid g = build_gauss_grid(1, K1, 2, f);
    std::vector<double> v(g.ubar.begin(), g.ubar.end());
    const double err = std::abs(integrate(g, v) - ref);
    CHECK(err < prev_err + 1e-15);
    prev_err = err;
  }
  CHECK(prev_err < 1e-8);
}
