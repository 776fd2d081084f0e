#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "jko/basis.hpp"
#include "jko/model.hpp"
#include "jko/quadrature.hpp"

using namespace jko;

TEST_CASE("index set enumerates nonzero modes up to K") {
  const IndexSet I1 = make_index_set(1, 4);
  CHECK(I1.size() == 4);
  const IndexSet I2 = make_index_set(2, 3);
  CHECK(I2.size() == 15);  // (K+1)^2 - 1
  for (const auto& m : I2.modes) {
    CHECK((m.k[0] != 0 || m.k[1] != 0));
    CHECK(m.k[0] <= 3);
    CHECK(m.k[1] <= 3);
  }
}

TEST_CASE("basis value closed form") {
  // b_k = sqrt(2)^nz / (pi |k|) prod cos(k_i pi x_i)
  ModeIndex k;
  k.d = 2;
  k.k = {2, 0};
  const double x[2] = {0.3, 0.8};
  const double expect =
      std::sqrt(2.0) / (M_PI * 2.0) * std::cos(2 * M_PI * 0.3);
  CHECK(basis_value(k, x) == doctest::Approx(expect).epsilon(1e-14));

  ModeIndex k2;
  k2.d = 2;
  k2.k = {1, 2};
  const double expect2 = 2.0 / (M_PI * std::sqrt(5.0)) * std::cos(M_PI * 0.3) *
                         std::cos(2 * M_PI * 0.8);
  CHECK(basis_value(k2, x) == doctest::Approx(expect2).epsilon(1e-14));
}

TEST_CASE("basis derivatives match finite differences") {
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> uni(0.1, 0.9);
  const double eps = 1e-6;
  for (int kx : {0, 1, 3})
    for (int ky : {0, 2}) {
      if (kx == 0 && ky == 0) continue;
      ModeIndex k;
      k.d = 2;
      k.k = {kx, ky};
      for (int trial = 0; trial < 3; ++trial) {
        double x[2] = {uni(eng), uni(eng)};
        double g[2], H[3], T[4];
        basis_gradient(k, x, g);
        basis_hessian(k, x, H);
        basis_third(k, x, T);
        for (int a = 0; a < 2; ++a) {
          double xp[2] = {x[0], x[1]}, xm[2] = {x[0], x[1]};
          xp[a] += eps;
          xm[a] -= eps;
          CHECK(g[a] == doctest::Approx((basis_value(k, xp) - basis_value(k, xm)) /
                                        (2 * eps))
                            .epsilon(1e-6)
                            .scale(1.0));
          double gp[2], gm[2];
          basis_gradient(k, xp, gp);
          basis_gradient(k, xm, gm);
          const int Haa = a == 0 ? 0 : 2;
          CHECK(H[Haa] == doctest::Approx((gp[a] - gm[a]) / (2 * eps))
                              .epsilon(1e-5)
                              .scale(1.0));
          CHECK(H[1] == doctest::Approx((gp[1 - a] - gm[1 - a]) / (2 * eps))
                            .epsilon(1e-5)
                            .scale(1.0));
          double Hp[3], Hm[3];
          basis_hessian(k, xp, Hp);
          basis_hessian(k, xm, Hm);
          // packed third order 111,112,122,222; differentiating H in x_a
          const int pick[2][3] = {{0, 1, 2}, {1, 2, 3}};
          for (int c = 0; c < 3; ++c)
            CHECK(T[pick[a][c]] == doctest::Approx((Hp[c] - Hm[c]) / (2 * eps))
                                       .epsilon(1e-4)
                                       .scale(1.0));
        }
      }
    }
}

TEST_CASE("mode gradients are orthonormal in L2") {
  const IndexSet I = make_index_set(2, 4);
  const ScalarField u = make_uniform_density(2);
  const QuadratureGrid fine = build_gauss_grid(2, 24, 3, u);
  const Eigen::MatrixXd G = gram_of_gradients(I, fine);
  const auto M = static_cast<Eigen::Index>(I.size());
  double dev = 0.0;
  for (Eigen::Index i = 0; i < M; ++i)
    for (Eigen::Index j = 0; j < M; ++j)
      dev = std::max(dev, std::abs(G(i, j) - (i == j ? 1.0 : 0.0)));
  CHECK(dev <= 1e-6);
}

TEST_CASE("axis modes under the uncorrected prefactor have gram diagonal 2") {
  // The 2^{d/2} prefactor would scale axis modes (one zero component) by
  // sqrt(2) too much; their normalized gram diagonal of 1 corresponds to 2
  // under that convention. Documents why the per-mode power is used.
  const IndexSet I = make_index_set(2, 2);
  const ScalarField u = make_uniform_density(2);
  const QuadratureGrid fine = build_gauss_grid(2, 16, 3, u);
  const Eigen::MatrixXd G = gram_of_gradients(I, fine);
  for (std::size_t i = 0; i < I.size(); ++i) {
    const auto& k = I.modes[i].k;
    const int nz = (k[0] != 0) + (k[1] != 0);
    const double paper_diag =
        G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) *
        std::pow(2.0, 2.0 - nz);
    if (nz == 1) CHECK(paper_diag == doctest::Approx(2.0).epsilon(1e-8));
    if (nz == 2) CHECK(paper_diag == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("tables reproduce pointwise basis derivatives") {
  const IndexSet I = make_index_set(2, 3);
  std::vector<double> pts = {0.15, 0.35, 0.5, 0.5, 0.82, 0.11};
  const BasisTables t = build_tables(I, pts.data(), 3, true);
  REQUIRE(t.n == 3);
  REQUIRE(t.M == I.size());
  CHECK(t.has_third);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < I.size(); ++j) {
      double g[2], H[3], T[4];
      basis_gradient(I.modes[j], &pts[2 * k], g);
      basis_hessian(I.modes[j], &pts[2 * k], H);
      basis_third(I.modes[j], &pts[2 * k], T);
      const auto ek = static_cast<Eigen::Index>(k);
      const auto ej = static_cast<Eigen::Index>(j);
      for (int a = 0; a < 2; ++a) CHECK(t.G[a](ek, ej) == doctest::Approx(g[a]));
      for (int c = 0; c < 3; ++c) CHECK(t.H[c](ek, ej) == doctest::Approx(H[c]));
      for (int c = 0; c < 4; ++c) CHECK(t.T3[c](ek, ej) == doctest::Approx(T[c]));
    }
}

TEST_CASE("table assembly is bitwise reproducible across thread counts") {
  const IndexSet I = make_index_set(2, 5);
  const ScalarField u = make_uniform_density(2);
  const QuadratureGrid g = build_gauss_grid(2, 10, 2, u);
  const BasisTables t1 = build_tables(I, g.node.data(), g.size(), true, 1);
  const BasisTables t4 = build_tables(I, g.node.data(), g.size(), true, 4);
  for (int a = 0; a < 2; ++a) CHECK((t1.G[a] - t4.G[a]).cwiseAbs().maxCoeff() == 0.0);
  for (int c = 0; c < 3; ++c) CHECK((t1.H[c] - t4.H[c]).cwiseAbs().maxCoeff() == 0.0);
  for (int c = 0; c < 4; ++c) CHECK((t1.T3[c] - t4.T3[c]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("projection residual of a smooth gradient field decays in K") {
  // v = grad psi, psi = exp(cos pi x1) cos(pi x2)
  auto v = [](const double* x, double* out) {
    const double c1 = std::cos(M_PI * x[0]), s1 = std::sin(M_PI * x[0]);
    const double c2 = std::cos(M_PI * x[1]), s2 = std::sin(M_PI * x[1]);
    const double e = std::exp(c1);
    out[0] = -M_PI * s1 * e * c2;
    out[1] = -M_PI * e * s2;
  };
  const ScalarField u = make_uniform_density(2);
  const QuadratureGrid fine = build_gauss_grid(2, 40, 3, u);

  double vnorm2 = 0.0;
  for (std::size_t k = 0; k < fine.size(); ++k) {
    double w[2];
    v(fine.x(k), w);
    vnorm2 += (w[0] * w[0] + w[1] * w[1]) * fine.weight[k];
  }

  double prev = 1e300;
  for (int K : {2, 4, 8, 16}) {
    const IndexSet I = make_index_set(2, K);
    const Eigen::VectorXd c = project(v, I, fine);
    // orthonormal gradients: residual^2 = |v|^2 - |c|^2
    const double r2 = vnorm2 - c.squaredNorm();
    CHECK(r2 > -1e-10);
    const double r = std::sqrt(std::max(0.0, r2));
    CHECK(r < prev);
    prev = r;
  }
  CHECK(prev < 1e-3);
}
