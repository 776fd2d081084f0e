#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <string>

#include "jko/fem.hpp"
#include "jko/model.hpp"

using namespace jko;

TEST_CASE("constant density under zero potential is a steady state") {
  const PressureModel model = make_power_pressure(2.0);
  const Potential pot = make_potential_zero(2);
  const ScalarField u0 = make_uniform_density(2);
  FemConfig fc;
  fc.L = 24;
  FemSolver fem(fc, model, pot, u0);

  REQUIRE(fem.values().size() == 24 * 24);
  for (int n = 0; n < 5; ++n) fem.step();
  CHECK(fem.time() == doctest::Approx(5 * fc.tau).epsilon(1e-15));
  CHECK((fem.values().array() - 1.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("mass is conserved every implicit step") {
  const PressureModel model = make_power_pressure(2.0);
  const Potential pot = make_potential_exp1();
  const ScalarField u0 = make_initial_density_exp1();
  FemConfig fc;
  fc.L = 40;
  FemSolver fem(fc, model, pot, u0);

  const double m0 = fem.mass();
  CHECK(m0 == doctest::Approx(1.0).epsilon(5e-3));  // lattice quadrature of u0
  for (int n = 0; n < 10; ++n) {
    fem.step();
    CHECK(std::abs(fem.mass() - m0) <= 1e-12);
  }
}

TEST_CASE("entropy of the flat state is the pointwise entropy density") {
  // h(1) = 1 for m=2 and V=0, so the lattice entropy equals the lattice volume
  const PressureModel model = make_power_pressure(2.0);
  const Potential pot = make_potential_zero(2);
  const ScalarField u0 = make_uniform_density(2);
  FemConfig fc;
  fc.L = 17;
  FemSolver fem(fc, model, pot, u0);
  CHECK(fem.entropy() == doctest::Approx(model.h(1.0)).epsilon(1e-12));
  CHECK(fem.entropy() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("entropy decreases along the discrete flow") {
  const PressureModel model = make_power_pressure(2.0);
  const Potential pot = make_potential_exp1();
  const ScalarField u0 = make_initial_density_exp1();
  FemConfig fc;
  fc.L = 40;
  FemSolver fem(fc, model, pot, u0);

  double prev = fem.entropy();
  for (int n = 0; n < 10; ++n) {
    fem.step();
    const double cur = fem.entropy();
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("interpolation is exact on lattice points and bilinear between them") {
  const PressureModel model = make_power_pressure(2.0);
  const Potential pot = make_potential_zero(2);
  const ScalarField u0 = make_initial_density_exp1();
  FemConfig fc;
  fc.L = 11;
  FemSolver fem(fc, model, pot, u0);

  // replace the field by an affine function, reproduced exactly by Q1
  const double hh = 1.0 / (fc.L - 1);
  Eigen::VectorXd v(fc.L * fc.L);
  for (int j = 0; j < fc.L; ++j)
    for (int i = 0; i < fc.L; ++i)
      v[j * fc.L + i] = 0.3 + 1.7 * (i * hh) - 0.6 * (j * hh);
  fem.set_values(v);

  for (double x : {0.0, 0.137, 0.5, 0.961, 1.0})
    for (double y : {0.0, 0.244, 0.77, 1.0}) {
      const double p[2] = {x, y};
      CHECK(fem.interpolate(p) ==
            doctest::Approx(0.3 + 1.7 * x - 0.6 * y).epsilon(1e-13));
    }

  // clamping: outside queries evaluate on the boundary
  const double out[2] = {-0.25, 0.5};
  const double edge[2] = {0.0, 0.5};
  CHECK(fem.interpolate(out) == fem.interpolate(edge));
}

TEST_CASE("lattice refinement drives self-distance down at second order") {
  const PressureModel model = make_power_pressure(2.0);
  const Potential pot = make_potential_zero(2);
  const ScalarField u0 = make_initial_density_exp1();
  const double T = 0.004;

  FemConfig fc;
  fc.L = 25;
  FemSolver f25(fc, model, pot, u0);
  fc.L = 49;
  FemSolver f49(fc, model, pot, u0);
  fc.L = 97;
  FemSolver f97(fc, model, pot, u0);
  f25.advance_to(T);
  f49.advance_to(T);
  f97.advance_to(T);

  // compare on the coarsest lattice (nested points)
  auto diff = [&](const FemSolver& a, const FemSolver& b) {
    double mx = 0.0;
    for (int j = 0; j < 25; ++j)
      for (int i = 0; i < 25; ++i) {
        const double p[2] = {i / 24.0, j / 24.0};
        mx = std::max(mx, std::abs(a.interpolate(p) - b.interpolate(p)));
      }
    return mx;
  };
  const double d1 = diff(f25, f49);
  const double d2 = diff(f49, f97);
  CHECK(d2 < d1);
  CHECK(d1 / d2 > 2.5);  // second order would give about 4
}

TEST_CASE("snapshot files carry the full lattice") {
  const PressureModel model = make_power_pressure(2.0);
  const Potential pot = make_potential_zero(2);
  const ScalarField u0 = make_uniform_density(2);
  FemConfig fc;
  fc.L = 6;
  FemSolver fem(fc, model, pot, u0);
  const std::string path = "fem_snapshot_test.csv";
  fem.write_snapshot_csv(path);

  std::FILE* f = std::fopen(path.c_str(), "r");
  REQUIRE(f != nullptr);
  int lines = 0;
  char buf[256];
  while (std::fgets(buf, sizeof buf, f)) ++lines;
  std::fclose(f);
  std::remove(path.c_str());
  CHECK(lines == 1 + 6 * 6);  // header plus one row per lattice point
}
